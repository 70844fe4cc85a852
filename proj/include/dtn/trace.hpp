#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dtn {

using NodeId = std::uint32_t;

// One contact interval between an unordered pair of nodes. Closed interval
// semantics: a and b are in contact at time t iff start <= t <= end.
struct ContactEvent {
    NodeId a = 0; // a < b after normalisation
    NodeId b = 0;
    double start = 0.0;
    double end = 0.0;

    friend bool operator==(const ContactEvent&, const ContactEvent&) = default;
};

struct ParseError : std::runtime_error {
    ParseError(std::size_t line_number, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_number) + ": " + what),
          line(line_number) {}
    std::size_t line;
};

// A multivariate contact point process: the superposition of all pairwise
// contact sequences. Immutable after construction and safe to share across
// threads. Construction normalises pair order, merges overlapping contacts
// of the same pair, and sorts events by (start, a, b, end).
class ContactTrace {
public:
    // node_count == 0 derives the count from the largest id seen.
    // horizon defaults to [min start, max end] of the events.
    explicit ContactTrace(std::vector<ContactEvent> events,
                          std::uint32_t node_count = 0,
                          std::optional<std::pair<double, double>> horizon = std::nullopt);

    const std::vector<ContactEvent>& events() const { return events_; }
    std::uint32_t node_count() const { return node_count_; }
    double t_min() const { return t_min_; }
    double t_max() const { return t_max_; }
    double max_duration() const { return max_duration_; }

private:
    std::vector<ContactEvent> events_;
    std::uint32_t node_count_ = 0;
    double t_min_ = 0.0;
    double t_max_ = 0.0;
    double max_duration_ = 0.0; // longest contact; bounds the active-at-t scan
};

// Contact starts of one pair plus the derived inter-contact times.
struct PairwiseSeries {
    NodeId a = 0;
    NodeId b = 0;
    std::vector<double> starts; // sorted
    std::vector<double> gaps;   // gaps[i] = starts[i+1] - starts[i]
};

PairwiseSeries pairwise_series(const ContactTrace& trace, NodeId a, NodeId b);

// CSV records `a,b,start,end`; optional header; `#`-prefixed comment lines
// are skipped except `# nodes=N` which pins the node count. When every label
// fits below a pinned N the labels are kept as node ids (so writing and
// re-reading a trace is exact); otherwise labels are remapped to a dense
// [0, n) by sorted label order.
ContactTrace parse_csv(std::istream& in);
ContactTrace parse_csv_file(const std::string& path);
void serialize_csv(std::ostream& out, const ContactTrace& trace);
std::string serialize_csv(const ContactTrace& trace);

// ONE-simulator connectivity reports: lines `<time> CONN <a> <b> up|down`.
// Unmatched `up` records are closed at horizon_end (default: last timestamp).
ContactTrace parse_one_report(std::istream& in,
                              std::optional<double> horizon_end = std::nullopt);
ContactTrace parse_one_report_file(const std::string& path,
                                   std::optional<double> horizon_end = std::nullopt);

} // namespace dtn
