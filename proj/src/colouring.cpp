#include "dtn/colouring.hpp"

#include <algorithm>
#include <stdexcept>

#include "dtn/rng.hpp"

namespace dtn {

namespace {

struct ActiveEdge {
    NodeId other;
    double end;
};

// Colour `node` at absolute time tau and chase every chain of contacts still
// open at tau. Expired adjacency entries are dropped as they are encountered.
// Recorded colour times are relative to t0.
void colour_and_cascade(NodeId node, double tau, double t0,
                        std::vector<std::vector<ActiveEdge>>& adj, std::vector<char>& coloured,
                        std::vector<NodeId>& order, std::vector<double>& times,
                        std::vector<NodeId>& queue) {
    queue.clear();
    queue.push_back(node);
    coloured[node] = 1;
    while (!queue.empty()) {
        const NodeId u = queue.back();
        queue.pop_back();
        order.push_back(u);
        times.push_back(tau - t0);
        auto& edges = adj[u];
        std::size_t w = 0;
        for (std::size_t r = 0; r < edges.size(); ++r) {
            const ActiveEdge e = edges[r];
            if (e.end < tau) continue; // expired; drop
            edges[w++] = e;
            if (!coloured[e.other]) {
                coloured[e.other] = 1;
                queue.push_back(e.other);
            }
        }
        edges.resize(w);
    }
}

} // namespace

ColouringRun run_colouring(const ContactTrace& trace, double t0, NodeId origin) {
    const std::uint32_t n = trace.node_count();
    if (origin >= n) throw std::out_of_range("run_colouring: origin out of range");
    if (!(t0 >= trace.t_min() && t0 <= trace.t_max())) {
        throw std::invalid_argument("run_colouring: t0 outside the trace horizon");
    }

    ColouringRun run;
    run.t0 = t0;
    run.origin = origin;
    run.colour_times.reserve(n);
    run.coloured_order.reserve(n);

    const auto& events = trace.events();
    std::vector<std::vector<ActiveEdge>> adj(n);
    std::vector<char> coloured(n, 0);
    std::vector<NodeId> queue;

    // Contacts already open at t0. Events are start-sorted, and any contact
    // open at t0 must start within max_duration of it, so only a bounded
    // window needs scanning.
    const auto from = std::lower_bound(
        events.begin(), events.end(), t0 - trace.max_duration(),
        [](const ContactEvent& e, double t) { return e.start < t; });
    auto it = from;
    for (; it != events.end() && it->start <= t0; ++it) {
        if (it->end >= t0) {
            adj[it->a].push_back({it->b, it->end});
            adj[it->b].push_back({it->a, it->end});
        }
    }
    colour_and_cascade(origin, t0, t0, adj, coloured, run.coloured_order, run.colour_times, queue);

    for (; it != events.end() && run.coloured_order.size() < n; ++it) {
        const ContactEvent& e = *it;
        const bool ca = coloured[e.a] != 0;
        const bool cb = coloured[e.b] != 0;
        if (ca && cb) continue;
        if (!ca && !cb) {
            // Neither side coloured yet: keep the contact around, a later
            // chain may run through it while it is still open.
            adj[e.a].push_back({e.b, e.end});
            adj[e.b].push_back({e.a, e.end});
            continue;
        }
        const NodeId fresh = ca ? e.b : e.a;
        adj[e.a].push_back({e.b, e.end});
        adj[e.b].push_back({e.a, e.end});
        colour_and_cascade(fresh, e.start, t0, adj, coloured, run.coloured_order, run.colour_times,
                           queue);
    }

    run.censored = run.coloured_order.size() < n;
    return run;
}

std::vector<ColouringRun> sample_runs(const ContactTrace& trace, std::size_t count,
                                      std::uint64_t seed) {
    if (trace.node_count() == 0) throw std::invalid_argument("sample_runs: empty trace");
    std::vector<ColouringRun> runs;
    runs.reserve(count);
    Rng rng(derive_seed(seed, 0xc01u));
    const double span = trace.t_max() - trace.t_min();
    for (std::size_t r = 0; r < count; ++r) {
        const double t0 = trace.t_min() + 0.8 * span * rng.uniform();
        const auto origin = static_cast<NodeId>(rng.below(trace.node_count()));
        runs.push_back(run_colouring(trace, t0, origin));
    }
    return runs;
}

DeltaSamples collect_deltas(const std::vector<ColouringRun>& runs, std::uint32_t n) {
    DeltaSamples out;
    out.n = n;
    out.runs = runs.size();
    if (n >= 1) out.per_i.resize(n - 1);
    out.censored_at.assign(n + 1, 0);
    for (const auto& run : runs) {
        const std::size_t m = run.colour_times.size();
        for (std::size_t i = 1; i + 1 <= m && i < n; ++i) {
            out.per_i[i - 1].push_back(run.colour_times[i] - run.colour_times[i - 1]);
        }
        if (run.censored) out.censored_at[std::min<std::size_t>(m, n)]++;
    }
    return out;
}

DeltaSamples sample_deltas(const ContactTrace& trace, std::size_t count, std::uint64_t seed) {
    return collect_deltas(sample_runs(trace, count, seed), trace.node_count());
}

LatencySamples sample_latencies(const ContactTrace& trace, std::size_t count, std::uint64_t seed) {
    const std::uint32_t n = trace.node_count();
    if (n < 2) throw std::invalid_argument("sample_latencies: need at least 2 nodes");
    LatencySamples out;
    out.latencies.reserve(count);
    Rng rng(derive_seed(seed, 0x1a7u));
    const double span = trace.t_max() - trace.t_min();
    for (std::size_t r = 0; r < count; ++r) {
        const double t0 = trace.t_min() + 0.8 * span * rng.uniform();
        const auto origin = static_cast<NodeId>(rng.below(n));
        const auto other = static_cast<NodeId>(rng.below(n - 1));
        const NodeId dest = other >= origin ? other + 1 : other;
        const ColouringRun run = run_colouring(trace, t0, origin);
        bool found = false;
        for (std::size_t j = 0; j < run.coloured_order.size(); ++j) {
            if (run.coloured_order[j] == dest) {
                out.latencies.push_back(run.colour_times[j]);
                found = true;
                break;
            }
        }
        if (!found) ++out.censored;
    }
    return out;
}

} // namespace dtn
