#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dtn/colouring.hpp"
#include "dtn/dist.hpp"
#include "dtn/trace.hpp"

namespace dtn {

enum class ModelKind {
    empirical,   // histograms of the observed spread steps
    mixture,     // per-step atom at zero + exponential remainder
    homogeneous, // every pair alike; steps derived from pooled contact gaps
};

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

// How the waiting time to a pair's next contact is summarised: keep the
// length-biased empirical curve, or collapse it to an exponential whose rate
// is one over the mean pooled gap.
enum class ResidualMode {
    empirical,
    exponential,
};

std::string to_string(ResidualMode mode);
ResidualMode residual_mode_from_string(const std::string& name);

// Parameters of one spread step in the mixture model: with probability con
// the step costs nothing (a chain was already open), otherwise the wait is
// exponential(lambda).
struct MixtureComponent {
    double con = 0.0;
    double lambda = 0.0;
    bool all_zero = false;     // no positive samples; lambda is a sentinel
    bool interpolated = false; // no samples at all; filled from neighbours
};

// Waiting time from an arbitrary instant to the next contact of a pair,
// estimated from pooled start-to-start intervals. In empirical mode longer
// intervals cover proportionally more of the timeline, which the weighting
// reflects: F(t) = sum_j min(g_j, t) / sum_j g_j. In exponential mode
// F(t) = 1 - exp(-t / mean gap).
struct ResidualEstimate {
    std::vector<double> gaps;   // sorted ascending
    std::vector<double> prefix; // prefix[k] = sum of gaps[0..k-1]
    double total = 0.0;
    ResidualMode mode = ResidualMode::empirical;

    double cdf(double t) const;
    double mean_gap() const { return gaps.empty() ? 0.0 : total / static_cast<double>(gaps.size()); }
    double rate() const { return total > 0.0 ? static_cast<double>(gaps.size()) / total : 0.0; }
};

ResidualEstimate estimate_residual(const ContactTrace& trace,
                                   ResidualMode mode = ResidualMode::empirical);

struct DeltaModel {
    ModelKind kind = ModelKind::mixture;
    std::uint32_t n = 0;
    std::vector<MixtureComponent> per_i;      // mixture; [i-1] for step i
    std::vector<std::vector<double>> samples; // empirical; [i-1] for step i
    ResidualEstimate residual;                // homogeneous
    std::vector<std::string> warnings;
};

// Split each step's samples at zero_eps: the small ones become the atom, the
// rest fit an exponential by matching the mean. Steps with no samples are
// interpolated from the nearest populated neighbours and flagged.
DeltaModel fit_mixture(const DeltaSamples& s, double zero_eps);

DeltaModel fit_empirical(const DeltaSamples& s);

// n-state pure-birth view of the trace: with i coloured and every pair
// alike, i*(n-i) pair processes race, so the step CDF is
// 1 - (1 - F_residual(t))^(i*(n-i)).
DeltaModel fit_homogeneous(const ContactTrace& trace,
                           ResidualMode mode = ResidualMode::empirical);

// Discretised distribution of spread step i (1 <= i <= n-1).
DiscreteDist render_delta(const DeltaModel& m, std::uint32_t i, double dt, std::size_t len);

// Mean of each step, [i-1] for step i. Analytic for the mixture, sample mean
// for the empirical kind; the homogeneous kind integrates the rendered
// survival on the given grid.
std::vector<double> per_i_means(const DeltaModel& m, double dt, std::size_t len);

std::string model_to_json(const DeltaModel& m);
DeltaModel model_from_json(const std::string& text);

} // namespace dtn
