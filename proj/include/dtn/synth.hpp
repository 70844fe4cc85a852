#pragma once

#include <cstdint>

#include "dtn/trace.hpp"

namespace dtn {

// Every unordered pair meets as an independent renewal process: the gap from
// the end of one contact to the start of the next is exponential(rate).
struct HomogeneousSpec {
    std::uint32_t n = 20;
    double rate = 5e-4;            // per-pair contact rate, 1/s
    double contact_duration = 0.0; // seconds, clipped at the horizon
    double horizon = 50000.0;      // seconds
    std::uint64_t seed = 1;
};

// Three nodes meeting in a fixed rotation (0,1), (1,2), (2,0), (0,1), ...
// with iid exponential gaps between consecutive meetings. Pairwise processes
// are strongly dependent (each pair fires every third event) while the
// spread process still forgets its past.
struct CyclicSpec {
    double gap_rate = 1e-2; // 1/s between consecutive meetings
    double horizon = 200000.0;
    std::uint64_t seed = 1;
};

// Dense contact islands bridged by periodic meeting windows. Nodes are split
// into equal clusters; pairs inside a cluster meet as Poisson processes all
// the time, pairs across clusters only during bursts at a fixed period, and
// each cross pair joins a given burst with probability burst_participation.
// The last loner_count nodes opt out of all of that and only make sporadic
// contacts with random partners.
struct ClusterSpec {
    std::uint32_t n = 24;
    std::uint32_t cluster_count = 3;
    double intra_rate = 1e-2;    // per-pair rate inside a cluster, 1/s
    double intra_duration = 20.0;
    double burst_period = 4000.0;
    double burst_length = 200.0;
    double burst_rate = 5e-2;    // per-pair rate while a burst is on, 1/s
    double inter_duration = 10.0;
    double burst_participation = 1.0;
    std::uint32_t loner_count = 0;
    double loner_rate = 0.0;     // contacts per second for each loner
    double loner_duration = 10.0;
    double horizon = 200000.0;
    std::uint64_t seed = 1;
};

ContactTrace gen_homogeneous(const HomogeneousSpec& spec);
ContactTrace gen_cyclic(const CyclicSpec& spec);
ContactTrace gen_clustered(const ClusterSpec& spec);

} // namespace dtn
