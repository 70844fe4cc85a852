#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dtn/estimate.hpp"

namespace dtn {

// CDF of the delivery latency to a uniformly chosen destination.
// fr[k] = F_R((k+1)*dt); f0 = F_R(0), the chance the destination is reachable
// the instant the message is created.
struct LatencyCurve {
    double dt = 1.0;
    double f0 = 0.0;
    std::vector<double> fr;
    std::vector<std::vector<double>> per_i; // optional: F_i, i = 2..n, [i-2]
    std::vector<std::string> warnings;
};

struct PredictOptions {
    // Internal grid refinement factor (power of two). Each chained step
    // pushes its floor-binned mass about half a bin early, so the chain is
    // run on a finer grid and sampled back. 0 picks the largest factor <= 16
    // that keeps the internal grid within max_bins.
    std::size_t refine = 0;
    // Double the covered horizon until at most tail_target of the latency
    // mass lies beyond it (or max_bins is hit, which leaves a warning). The
    // returned curve may then be longer than requested.
    bool auto_extend = true;
    std::size_t max_bins = std::size_t{1} << 16;
    double tail_target = 1e-3;
    bool keep_per_i = false;
};

// Unrestricted spread: the wait to reach i+1 nodes is the sum of the first i
// steps, and the destination is equally likely to be reached at each rank,
// so F_R is the average of the chained step CDFs.
LatencyCurve epidemic_latency(const DeltaModel& m, double dt, std::size_t len,
                              const PredictOptions& opts = {});

// F_R evaluated at a deadline by linear interpolation on the curve's grid;
// beyond the grid the last value is used.
double delivery_ratio(const LatencyCurve& c, double ttl);

// Number of stragglers: the largest i for which the last i spread steps are
// more than twice as slow as the first i (means taken per step). Those nodes
// dominate the end of the spread and are excluded from the replication race.
std::uint32_t solitary_count(std::span<const double> delta_means);

struct MultiCopyParams {
    std::uint64_t copies = 8;                       // replication budget a
    std::optional<std::uint32_t> solitary_override; // skip the mean heuristic
    std::uint32_t k_max = 256;                      // series truncation
    double tail_eps = 1e-6;                         // stop once < this much P-mass remains
};

// Replication-limited spread: once the budget is spent, only the a copy
// holders can reach new nodes, so late steps need k >= 1 attempts by slower
// racers. Step i keeps its unrestricted law while i <= a, then becomes a
// geometric mixture of powers of the appropriate step CDF.
LatencyCurve multicopy_latency(const DeltaModel& m, const MultiCopyParams& p, double dt,
                               std::size_t len, const PredictOptions& opts = {});

// P(step i needs exactly k attempts); exposed for the algebra checks.
// Middle phase: a < i < n - s, attempts race over the budgeted holders.
double middle_phase_prob(std::uint32_t i, std::uint32_t k, std::uint32_t a, std::uint32_t n,
                         std::uint32_t s);
// End phase: i >= n - s, only stragglers remain.
double end_phase_prob(std::uint32_t i, std::uint32_t k, std::uint32_t a);

struct FitComparison {
    double ks = 0.0;           // Kolmogorov-Smirnov distance to the sample ECDF
    double mean_abs_gap = 0.0; // mean |F(x_j) - ECDF midpoint|
    std::size_t samples = 0;
};

FitComparison compare_to_samples(const LatencyCurve& c, std::span<const double> latencies);

// sup |F_a - F_b| over both grids.
double curve_ks(const LatencyCurve& a, const LatencyCurve& b);

// Classic two-sample Kolmogorov-Smirnov statistic between two ECDFs.
double two_sample_ks(std::span<const double> a, std::span<const double> b);

// `t,F_R` rows starting with the t=0 value.
void write_curve_csv(std::ostream& out, const LatencyCurve& c);

} // namespace dtn
