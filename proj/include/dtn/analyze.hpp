#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dtn/colouring.hpp"
#include "dtn/estimate.hpp"
#include "dtn/trace.hpp"

namespace dtn {

enum class CorrMethod {
    pearson,
    spearman, // Pearson on average ranks; robust to heavy-tailed residuals
};

std::string to_string(CorrMethod method);
CorrMethod corr_method_from_string(const std::string& name);

// How synchronised the pair processes around each node are. For every pair
// with at least two contact starts in the window, sample "time to that
// pair's next contact start" on a uniform grid over the window (censored at
// the trace end), then correlate those series between pairs sharing a node.
struct CorrelationReport {
    std::vector<double> node_avg; // mean pairwise correlation per node; NaN if excluded
    std::vector<NodeId> excluded; // nodes with fewer than two active pairs
    double window_start = 0.0;
    double window = 0.0;
    std::size_t grid_points = 0;
    CorrMethod method = CorrMethod::pearson;
};

CorrelationReport contact_correlation(const ContactTrace& trace, double window,
                                      std::size_t grid_points = 200,
                                      std::optional<double> window_start = std::nullopt,
                                      CorrMethod method = CorrMethod::pearson);

// Fraction of included nodes whose average correlation exceeds each
// threshold; thresholds 0, 0.05, ..., 1.
std::vector<std::pair<double, double>> correlation_ccdf(const CorrelationReport& rep);

// Pearson correlation between the time i nodes were reached (T_i) and the
// following step length across runs. The spread model treats these as
// independent; this measures how wrong that is on a given trace.
struct IndependenceResult {
    double rho = 0.0;
    std::size_t pairs = 0;
    bool degenerate = false; // too few runs or a constant series
};

IndependenceResult t_delta_correlation(const std::vector<ColouringRun>& runs, std::uint32_t i);

// Mean observed time to reach i+1 nodes, [i] for rank i+1 (so [0] == 0);
// censored runs contribute to the ranks they completed.
std::vector<double> mean_colour_times(const std::vector<ColouringRun>& runs, std::uint32_t n);

// Model counterpart: cumulative sums of the step means.
std::vector<double> model_mean_colour_times(const DeltaModel& m, double dt, std::size_t len);

// `i,delta_seconds` rows, one per pooled sample.
void write_delta_samples_csv(std::ostream& out, const DeltaSamples& s);

// Per-step complementary CDF staircase, `i,delta_seconds,ccdf` rows with
// ccdf = P(step i takes longer than t). Tied values collapse to one row;
// steps without samples are skipped. Ready for log-scale latency plots.
void write_delta_ccdf_csv(std::ostream& out, const DeltaSamples& s);

// `node,avg_corr` rows; excluded nodes get an empty value.
void write_correlation_csv(std::ostream& out, const CorrelationReport& rep);

} // namespace dtn
