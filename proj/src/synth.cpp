#include "dtn/synth.hpp"

#include <stdexcept>

#include "dtn/rng.hpp"

namespace dtn {

namespace {

std::uint64_t pair_tag(NodeId a, NodeId b) {
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

// Renewal contact process for one pair inside [w0, w1): exponential(rate)
// gaps between the end of a contact and the start of the next, contact ends
// clipped to clip_end.
void renewal_contacts(std::vector<ContactEvent>& out, NodeId a, NodeId b, Rng& rng, double rate,
                      double duration, double w0, double w1, double clip_end) {
    double t = w0 + rng.exponential(rate);
    while (t < w1) {
        const double end = std::min(t + duration, clip_end);
        out.push_back({a, b, t, end});
        t = end + rng.exponential(rate);
    }
}

} // namespace

ContactTrace gen_homogeneous(const HomogeneousSpec& spec) {
    if (spec.n < 2) throw std::invalid_argument("gen_homogeneous: need at least 2 nodes");
    if (!(spec.rate > 0.0)) throw std::invalid_argument("gen_homogeneous: rate must be positive");
    if (!(spec.horizon > 0.0)) throw std::invalid_argument("gen_homogeneous: bad horizon");
    std::vector<ContactEvent> events;
    for (NodeId a = 0; a < spec.n; ++a) {
        for (NodeId b = a + 1; b < spec.n; ++b) {
            Rng rng(derive_seed(spec.seed, pair_tag(a, b)));
            renewal_contacts(events, a, b, rng, spec.rate, spec.contact_duration, 0.0,
                             spec.horizon, spec.horizon);
        }
    }
    return ContactTrace(std::move(events), spec.n, {{0.0, spec.horizon}});
}

ContactTrace gen_cyclic(const CyclicSpec& spec) {
    if (!(spec.gap_rate > 0.0)) throw std::invalid_argument("gen_cyclic: rate must be positive");
    if (!(spec.horizon > 0.0)) throw std::invalid_argument("gen_cyclic: bad horizon");
    static constexpr NodeId kPairs[3][2] = {{0, 1}, {1, 2}, {0, 2}};
    Rng rng(derive_seed(spec.seed, 0));
    std::vector<ContactEvent> events;
    double t = rng.exponential(spec.gap_rate);
    for (std::size_t j = 0; t < spec.horizon; ++j) {
        const auto& p = kPairs[j % 3];
        events.push_back({p[0], p[1], t, t});
        t += rng.exponential(spec.gap_rate);
    }
    return ContactTrace(std::move(events), 3, {{0.0, spec.horizon}});
}

ContactTrace gen_clustered(const ClusterSpec& spec) {
    if (spec.cluster_count < 1) throw std::invalid_argument("gen_clustered: need a cluster");
    if (spec.loner_count >= spec.n) throw std::invalid_argument("gen_clustered: all nodes loners");
    const std::uint32_t social = spec.n - spec.loner_count;
    if (social < spec.cluster_count) {
        throw std::invalid_argument("gen_clustered: fewer social nodes than clusters");
    }
    if (!(spec.horizon > 0.0)) throw std::invalid_argument("gen_clustered: bad horizon");

    // Contiguous blocks; the first (social % cluster_count) clusters take the
    // remainder. Loners are the trailing node ids.
    std::vector<std::uint32_t> cluster_of(social);
    {
        std::uint32_t node = 0;
        for (std::uint32_t c = 0; c < spec.cluster_count; ++c) {
            std::uint32_t size = social / spec.cluster_count + (c < social % spec.cluster_count);
            for (std::uint32_t k = 0; k < size; ++k) cluster_of[node++] = c;
        }
    }

    std::vector<ContactEvent> events;
    for (NodeId a = 0; a < social; ++a) {
        for (NodeId b = a + 1; b < social; ++b) {
            Rng rng(derive_seed(spec.seed, pair_tag(a, b)));
            if (cluster_of[a] == cluster_of[b]) {
                renewal_contacts(events, a, b, rng, spec.intra_rate, spec.intra_duration, 0.0,
                                 spec.horizon, spec.horizon);
                continue;
            }
            // Cross pairs meet only inside bursts they joined.
            for (double w0 = 0.0; w0 < spec.horizon; w0 += spec.burst_period) {
                const bool joined = rng.bernoulli(spec.burst_participation);
                if (!joined) continue;
                const double w1 = std::min(w0 + spec.burst_length, spec.horizon);
                renewal_contacts(events, a, b, rng, spec.burst_rate, spec.inter_duration, w0, w1,
                                 w1);
            }
        }
    }
    for (NodeId loner = social; loner < spec.n; ++loner) {
        if (!(spec.loner_rate > 0.0)) continue;
        Rng rng(derive_seed(spec.seed, 0xffffffff00000000ULL | loner));
        double t = rng.exponential(spec.loner_rate);
        while (t < spec.horizon) {
            const auto partner = static_cast<NodeId>(rng.below(social));
            const double end = std::min(t + spec.loner_duration, spec.horizon);
            events.push_back({partner, loner, t, end});
            t = end + rng.exponential(spec.loner_rate);
        }
    }
    return ContactTrace(std::move(events), spec.n, {{0.0, spec.horizon}});
}

} // namespace dtn
