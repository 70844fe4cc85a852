#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace dtn {

// A probability distribution discretised on a uniform time grid.
//
// Bin 0 covers [0, dt] and carries the point mass at exactly t = 0 (tracked
// separately in atom0 so zero-waiting-time probability survives the algebra
// exactly); bin k >= 1 covers (k*dt, (k+1)*dt]. `tail` is the probability
// beyond the grid. Invariant: sum(mass) + tail == 1 within 1e-9.
struct DiscreteDist {
    double dt = 1.0;
    std::vector<double> mass;
    double atom0 = 0.0; // portion of mass[0] sitting at exactly t = 0
    double tail = 0.0;
};

// Point mass at t = 0; the identity of convolve.
DiscreteDist dirac_zero(double dt, std::size_t len = 1);

// mass[k] = exp(-rate*k*dt) - exp(-rate*(k+1)*dt), tail = exp(-rate*len*dt).
DiscreteDist from_exponential(double rate, double dt, std::size_t len);

// Normalised histogram of the samples; values beyond the grid go to the
// tail, values at exactly zero into the atom. Throws on an empty list or a
// negative sample.
DiscreteDist from_samples(std::span<const double> samples, double dt, std::size_t len);

// Discrete convolution by index addition (Listing-1 style). Result length is
// max(f, g) unless max_len overrides it; overflow accumulates into the tail.
// Uses an FFT fast path for large grids; the direct double sum is the
// reference semantics. Throws on mismatched dt.
DiscreteDist convolve(const DiscreteDist& f, const DiscreteDist& g, std::size_t max_len = 0);

// Running sum of mass; cdf[k] estimates F((k+1)*dt), final value = 1 - tail.
std::vector<double> to_cdf(const DiscreteDist& f);

// Inverse of to_cdf: difference a CDF vector back into bin masses.
DiscreteDist dist_from_cdf(std::span<const double> cdf, double dt, double atom0 = 0.0);

// Pointwise 1 - (1 - F(t))^m: CDF of the minimum of m independent draws.
std::vector<double> survival_power_min(std::span<const double> cdf, std::uint64_t m);

// Pointwise F(t)^k: CDF of the k-th (last) of k independent completions.
std::vector<double> survival_power_kfold(std::span<const double> cdf, std::uint64_t k);

// Distribution of the minimum of m draws of f (atom and tail handled exactly).
DiscreteDist min_of(const DiscreteDist& f, std::uint64_t m);

// Grid-part mean with midpoint bin values; the atom contributes 0 and the
// tail is excluded.
double mean(const DiscreteDist& f);

double total_mass(const DiscreteDist& f); // sum(mass) + tail

// Throws if the invariants do not hold (negative mass, total != 1, ...).
void validate(const DiscreteDist& f, double tol = 1e-9);

// `t,pdf,cdf` rows; a leading t=0 row reports the zero atom.
void write_dist_csv(std::ostream& out, const DiscreteDist& f);

} // namespace dtn
