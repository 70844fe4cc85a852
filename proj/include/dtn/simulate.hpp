#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "dtn/trace.hpp"

namespace dtn {

struct MessageSpec {
    std::uint64_t id = 0;
    NodeId source = 0;
    NodeId dest = 0;
    double created_at = 0.0;
    double ttl = std::numeric_limits<double>::infinity();
};

struct DeliveryRecord {
    std::uint64_t id = 0;
    bool delivered = false;
    double latency = 0.0; // valid only when delivered
};

enum class Protocol {
    epidemic,      // every carrier forwards to everyone it meets
    spray_binary,  // carrier with c > 1 tokens hands floor(c/2) to a tokenless peer
    spray_source,  // only the source hands out tokens, one per peer
};

Protocol protocol_from_string(const std::string& name);
std::string to_string(Protocol p);

struct SprayOptions {
    std::uint64_t copies = 8;
    bool binary = true;
};

// Flood the message along every contact chain; a node in contact (directly
// or transitively through simultaneously open contacts) with a carrier
// becomes a carrier instantly.
std::vector<DeliveryRecord> sim_epidemic(const ContactTrace& trace,
                                         std::span<const MessageSpec> msgs);

// Token-budget replication. The source starts with `copies` tokens; carriers
// holding one token stop replicating and only deliver on meeting the
// destination. The token total is conserved throughout (checked).
std::vector<DeliveryRecord> sim_spray(const ContactTrace& trace, std::span<const MessageSpec> msgs,
                                      const SprayOptions& opts);

// Poisson-like message workload: creation gaps uniform in [min_gap, max_gap],
// source and destination uniform and distinct.
struct MessageSchedule {
    double window_start = 0.0; // absolute; commonly trace.t_min()
    double window_length = 40000.0;
    double min_gap = 50.0;
    double max_gap = 100.0;
};

std::vector<MessageSpec> schedule_messages(const ContactTrace& trace, const MessageSchedule& sched,
                                           std::uint64_t seed);

// `runs` independent workloads (seeds derived per run), records pooled.
std::vector<DeliveryRecord> run_batch(const ContactTrace& trace, const MessageSchedule& sched,
                                      std::size_t runs, Protocol protocol, std::uint64_t copies,
                                      std::uint64_t seed);

// Finite latencies of the delivered messages.
std::vector<double> delivered_latencies(std::span<const DeliveryRecord> records);

void write_records_csv(std::ostream& out, std::span<const DeliveryRecord> records);

} // namespace dtn
