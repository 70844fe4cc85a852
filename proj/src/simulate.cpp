#include "dtn/simulate.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "dtn/colouring.hpp"
#include "dtn/io.hpp"
#include "dtn/rng.hpp"

namespace dtn {

namespace {

struct ActiveEdge {
    NodeId other;
    double end;
};

class SprayRun {
public:
    SprayRun(const ContactTrace& trace, const MessageSpec& msg, const SprayOptions& opts)
        : trace_(trace), msg_(msg), opts_(opts), adj_(trace.node_count()),
          tokens_(trace.node_count(), 0) {}

    DeliveryRecord run() {
        if (msg_.source >= trace_.node_count() || msg_.dest >= trace_.node_count()) {
            throw std::out_of_range("sim_spray: node id out of range");
        }
        if (!(msg_.created_at >= trace_.t_min() && msg_.created_at <= trace_.t_max())) {
            throw std::invalid_argument("sim_spray: message created outside the trace horizon");
        }
        if (opts_.copies < 1) throw std::invalid_argument("sim_spray: need at least one copy");
        tokens_[msg_.source] = opts_.copies;
        DeliveryRecord rec{msg_.id, false, 0.0};
        if (msg_.source == msg_.dest) {
            rec.delivered = true;
            return rec;
        }

        const auto& events = trace_.events();
        const auto from = std::lower_bound(
            events.begin(), events.end(), msg_.created_at - trace_.max_duration(),
            [](const ContactEvent& e, double t) { return e.start < t; });
        auto it = from;
        for (; it != events.end() && it->start <= msg_.created_at; ++it) {
            if (it->end >= msg_.created_at) insert_edge(*it);
        }
        if (relax(msg_.created_at)) {
            rec.delivered = true;
            rec.latency = 0.0;
            return rec;
        }
        const double deadline = msg_.created_at + msg_.ttl;
        for (; it != events.end() && it->start <= deadline; ++it) {
            insert_edge(*it);
            // A lone contact can only matter right now if it joins a carrier
            // to a bare node; anything else waits in the adjacency.
            if ((tokens_[it->a] > 0) == (tokens_[it->b] > 0)) continue;
            if (relax(it->start)) {
                rec.delivered = true;
                rec.latency = it->start - msg_.created_at;
                return rec;
            }
        }
        return rec;
    }

private:
    void insert_edge(const ContactEvent& e) {
        adj_[e.a].push_back({e.b, e.end});
        adj_[e.b].push_back({e.a, e.end});
    }

    // Hand out tokens across every chain open at tau until nothing moves;
    // returns true as soon as a carrier is in (transitive) contact with the
    // destination. Deterministic: nodes in id order, edges in arrival order.
    bool relax(double tau) {
        const NodeId n = trace_.node_count();
        bool changed = true;
        while (changed) {
            changed = false;
            for (NodeId u = 0; u < n; ++u) {
                if (tokens_[u] == 0) continue;
                auto& edges = adj_[u];
                std::size_t w = 0;
                for (std::size_t r = 0; r < edges.size(); ++r) {
                    const ActiveEdge e = edges[r];
                    if (e.end < tau) continue; // expired
                    edges[w++] = e;
                    if (e.other == msg_.dest) {
                        return true; // carrier meets the destination
                    }
                    const bool may_replicate =
                        tokens_[u] >= 2 && (opts_.binary || u == msg_.source);
                    if (may_replicate && tokens_[e.other] == 0) {
                        const std::uint64_t give = opts_.binary ? tokens_[u] / 2 : 1;
                        tokens_[e.other] += give;
                        tokens_[u] -= give;
                        changed = true;
                    }
                }
                edges.resize(w);
            }
        }
        const auto total = std::accumulate(tokens_.begin(), tokens_.end(), std::uint64_t{0});
        if (total != opts_.copies) throw std::logic_error("sim_spray: token count not conserved");
        return false;
    }

    const ContactTrace& trace_;
    const MessageSpec& msg_;
    const SprayOptions& opts_;
    std::vector<std::vector<ActiveEdge>> adj_;
    std::vector<std::uint64_t> tokens_;
};

} // namespace

Protocol protocol_from_string(const std::string& name) {
    if (name == "epidemic") return Protocol::epidemic;
    if (name == "spray" || name == "spray-binary") return Protocol::spray_binary;
    if (name == "spray-source") return Protocol::spray_source;
    throw std::invalid_argument("unknown protocol: " + name);
}

std::string to_string(Protocol p) {
    switch (p) {
    case Protocol::epidemic: return "epidemic";
    case Protocol::spray_binary: return "spray-binary";
    case Protocol::spray_source: return "spray-source";
    }
    throw std::logic_error("unknown protocol");
}

std::vector<DeliveryRecord> sim_epidemic(const ContactTrace& trace,
                                         std::span<const MessageSpec> msgs) {
    std::vector<DeliveryRecord> records;
    records.reserve(msgs.size());
    for (const MessageSpec& msg : msgs) {
        if (msg.dest >= trace.node_count()) {
            throw std::out_of_range("sim_epidemic: node id out of range");
        }
        const ColouringRun run = run_colouring(trace, msg.created_at, msg.source);
        DeliveryRecord rec{msg.id, false, 0.0};
        for (std::size_t j = 0; j < run.coloured_order.size(); ++j) {
            if (run.coloured_order[j] == msg.dest) {
                if (run.colour_times[j] <= msg.ttl) {
                    rec.delivered = true;
                    rec.latency = run.colour_times[j];
                }
                break;
            }
        }
        records.push_back(rec);
    }
    return records;
}

std::vector<DeliveryRecord> sim_spray(const ContactTrace& trace, std::span<const MessageSpec> msgs,
                                      const SprayOptions& opts) {
    std::vector<DeliveryRecord> records;
    records.reserve(msgs.size());
    for (const MessageSpec& msg : msgs) {
        records.push_back(SprayRun(trace, msg, opts).run());
    }
    return records;
}

std::vector<MessageSpec> schedule_messages(const ContactTrace& trace, const MessageSchedule& sched,
                                           std::uint64_t seed) {
    if (trace.node_count() < 2) throw std::invalid_argument("schedule: need at least 2 nodes");
    if (!(sched.min_gap > 0.0 && sched.max_gap >= sched.min_gap)) {
        throw std::invalid_argument("schedule: bad gap range");
    }
    Rng rng(derive_seed(seed, 0x5c4edULL));
    std::vector<MessageSpec> msgs;
    const double window_end = std::min(sched.window_start + sched.window_length, trace.t_max());
    double t = sched.window_start;
    for (std::uint64_t id = 0;; ++id) {
        t += rng.uniform(sched.min_gap, sched.max_gap);
        if (t > window_end) break;
        MessageSpec m;
        m.id = id;
        m.created_at = t;
        m.source = static_cast<NodeId>(rng.below(trace.node_count()));
        const auto other = static_cast<NodeId>(rng.below(trace.node_count() - 1));
        m.dest = other >= m.source ? other + 1 : other;
        msgs.push_back(m);
    }
    return msgs;
}

std::vector<DeliveryRecord> run_batch(const ContactTrace& trace, const MessageSchedule& sched,
                                      std::size_t runs, Protocol protocol, std::uint64_t copies,
                                      std::uint64_t seed) {
    std::vector<DeliveryRecord> pooled;
    for (std::size_t r = 0; r < runs; ++r) {
        auto msgs = schedule_messages(trace, sched, derive_seed(seed, r));
        for (auto& m : msgs) m.id += static_cast<std::uint64_t>(r) << 32;
        std::vector<DeliveryRecord> recs;
        if (protocol == Protocol::epidemic) {
            recs = sim_epidemic(trace, msgs);
        } else {
            SprayOptions opts;
            opts.copies = copies;
            opts.binary = protocol == Protocol::spray_binary;
            recs = sim_spray(trace, msgs, opts);
        }
        pooled.insert(pooled.end(), recs.begin(), recs.end());
    }
    return pooled;
}

std::vector<double> delivered_latencies(std::span<const DeliveryRecord> records) {
    std::vector<double> out;
    for (const auto& r : records) {
        if (r.delivered) out.push_back(r.latency);
    }
    return out;
}

void write_records_csv(std::ostream& out, std::span<const DeliveryRecord> records) {
    out << "msg,delivered,latency\n";
    for (const auto& r : records) {
        out << r.id << ',' << (r.delivered ? 1 : 0) << ','
            << (r.delivered ? fmt_g12(r.latency) : "inf") << "\n";
    }
}

} // namespace dtn
