#pragma once

#include <cstdint>
#include <vector>

#include "dtn/trace.hpp"

namespace dtn {

// One observation of the spread process: start at (t0, origin) and colour a
// node the first instant a contact chain connects it to a coloured node.
// Contacts already open at t0, and chains through simultaneously open
// contacts, propagate instantly, so several nodes can share a colour time
// (including 0 for nodes reachable at t0 itself).
struct ColouringRun {
    double t0 = 0.0;
    NodeId origin = 0;
    std::vector<double> colour_times;   // relative to t0, non-decreasing; [0] == 0
    std::vector<NodeId> coloured_order; // same order as colour_times
    bool censored = false;              // trace ended before everyone was coloured
};

ColouringRun run_colouring(const ContactTrace& trace, double t0, NodeId origin);

// Pooled spread-step observations. per_i[i-1] holds samples of the time from
// "i nodes coloured" to "i+1 nodes coloured", i = 1..n-1. Runs that end early
// contribute their completed steps only; censored_at[m] counts runs that
// finished the trace with m nodes coloured.
struct DeltaSamples {
    std::uint32_t n = 0;
    std::size_t runs = 0;
    std::vector<std::vector<double>> per_i;
    std::vector<std::size_t> censored_at;
};

// Start times are drawn uniformly from the first 80% of the trace so each run
// has room to complete; origins are uniform over all nodes.
std::vector<ColouringRun> sample_runs(const ContactTrace& trace, std::size_t count,
                                      std::uint64_t seed);

DeltaSamples collect_deltas(const std::vector<ColouringRun>& runs, std::uint32_t n);

DeltaSamples sample_deltas(const ContactTrace& trace, std::size_t count, std::uint64_t seed);

// Spread latency to one uniformly chosen destination per run; runs whose
// destination was never reached are counted, not sampled.
struct LatencySamples {
    std::vector<double> latencies;
    std::size_t censored = 0;
};

LatencySamples sample_latencies(const ContactTrace& trace, std::size_t count, std::uint64_t seed);

} // namespace dtn
