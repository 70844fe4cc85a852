#include "dtn/trace.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace dtn {

namespace {

bool event_order(const ContactEvent& x, const ContactEvent& y) {
    if (x.start != y.start) return x.start < y.start;
    if (x.a != y.a) return x.a < y.a;
    if (x.b != y.b) return x.b < y.b;
    return x.end < y.end;
}

void format_time(std::string& out, double t) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", t);
    out += buf;
}

} // namespace

ContactTrace::ContactTrace(std::vector<ContactEvent> events,
                           std::uint32_t node_count,
                           std::optional<std::pair<double, double>> horizon) {
    for (auto& e : events) {
        if (e.a == e.b) throw std::invalid_argument("self-contact in event list");
        if (e.a > e.b) std::swap(e.a, e.b);
        if (!(e.start <= e.end)) throw std::invalid_argument("contact with start > end");
        if (!std::isfinite(e.start) || !std::isfinite(e.end))
            throw std::invalid_argument("non-finite contact time");
    }

    // Merge overlapping or touching intervals of the same pair. Closed
    // intervals: [1,2] and [2,3] share the instant 2 and merge to [1,3].
    std::sort(events.begin(), events.end(), [](const ContactEvent& x, const ContactEvent& y) {
        if (x.a != y.a) return x.a < y.a;
        if (x.b != y.b) return x.b < y.b;
        if (x.start != y.start) return x.start < y.start;
        return x.end < y.end;
    });
    std::vector<ContactEvent> merged;
    merged.reserve(events.size());
    for (const auto& e : events) {
        if (!merged.empty()) {
            auto& last = merged.back();
            if (last.a == e.a && last.b == e.b && e.start <= last.end) {
                last.end = std::max(last.end, e.end);
                continue;
            }
        }
        merged.push_back(e);
    }
    std::sort(merged.begin(), merged.end(), event_order);
    events_ = std::move(merged);

    NodeId max_id = 0;
    for (const auto& e : events_) max_id = std::max(max_id, e.b);
    node_count_ = node_count != 0 ? node_count : (events_.empty() ? 0 : max_id + 1);
    if (!events_.empty() && max_id >= node_count_)
        throw std::invalid_argument("event references node id beyond node count");

    if (horizon) {
        t_min_ = horizon->first;
        t_max_ = horizon->second;
        if (!(t_min_ <= t_max_)) throw std::invalid_argument("horizon with t_min > t_max");
    } else if (!events_.empty()) {
        t_min_ = events_.front().start;
        t_max_ = 0.0;
        for (const auto& e : events_) t_max_ = std::max(t_max_, e.end);
    }
    for (const auto& e : events_) {
        if (e.start < t_min_ || e.end > t_max_)
            throw std::invalid_argument("event outside the stated horizon");
        max_duration_ = std::max(max_duration_, e.end - e.start);
    }
}

PairwiseSeries pairwise_series(const ContactTrace& trace, NodeId a, NodeId b) {
    if (a >= trace.node_count() || b >= trace.node_count())
        throw std::out_of_range("pairwise_series: node id out of range");
    if (a == b) throw std::invalid_argument("pairwise_series: a == b");
    PairwiseSeries s;
    s.a = std::min(a, b);
    s.b = std::max(a, b);
    for (const auto& e : trace.events())
        if (e.a == s.a && e.b == s.b) s.starts.push_back(e.start);
    if (s.starts.size() > 1) {
        s.gaps.reserve(s.starts.size() - 1);
        for (std::size_t i = 0; i + 1 < s.starts.size(); ++i)
            s.gaps.push_back(s.starts[i + 1] - s.starts[i]);
    }
    return s;
}

namespace {

std::string_view trim(std::string_view v) {
    while (!v.empty() && (v.front() == ' ' || v.front() == '\t' || v.front() == '\r')) v.remove_prefix(1);
    while (!v.empty() && (v.back() == ' ' || v.back() == '\t' || v.back() == '\r')) v.remove_suffix(1);
    return v;
}

bool parse_double(std::string_view v, double& out) {
    v = trim(v);
    if (v.empty()) return false;
    const char* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    return ec == std::errc() && ptr == end;
}

bool parse_u64(std::string_view v, std::uint64_t& out) {
    v = trim(v);
    if (v.empty()) return false;
    const char* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    return ec == std::errc() && ptr == end;
}

// Remap arbitrary integer labels to a dense [0, n) by sorted label order.
struct LabelMap {
    std::map<std::uint64_t, NodeId> dense;
    void note(std::uint64_t label) { dense.emplace(label, 0); }
    void freeze() {
        NodeId next = 0;
        for (auto& [label, id] : dense) id = next++;
    }
    NodeId operator[](std::uint64_t label) const { return dense.at(label); }
    std::uint32_t size() const { return static_cast<std::uint32_t>(dense.size()); }
    std::uint64_t max_label() const { return dense.empty() ? 0 : dense.rbegin()->first; }
};

} // namespace

ContactTrace parse_csv(std::istream& in) {
    struct RawEvent {
        std::uint64_t a, b;
        double start, end;
    };
    std::vector<RawEvent> raw;
    LabelMap labels;
    std::optional<std::uint32_t> pinned_nodes;

    std::string line;
    std::size_t line_no = 0;
    bool first_data_line = true;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view v = trim(line);
        if (v.empty()) continue;
        if (v.front() == '#') {
            std::string_view body = trim(v.substr(1));
            if (body.rfind("nodes=", 0) == 0) {
                std::uint64_t n = 0;
                if (!parse_u64(body.substr(6), n))
                    throw ParseError(line_no, "bad node count in '# nodes=' comment");
                pinned_nodes = static_cast<std::uint32_t>(n);
            }
            continue;
        }

        std::string_view fields[4];
        std::size_t count = 0;
        while (count < 4) {
            auto comma = v.find(',');
            fields[count++] = comma == std::string_view::npos ? v : v.substr(0, comma);
            if (comma == std::string_view::npos) { v = {}; break; }
            v.remove_prefix(comma + 1);
        }
        const bool trailing = !v.empty();

        RawEvent e{};
        const bool numeric = count == 4 && !trailing &&
                             parse_u64(fields[0], e.a) && parse_u64(fields[1], e.b) &&
                             parse_double(fields[2], e.start) && parse_double(fields[3], e.end);
        if (!numeric) {
            if (first_data_line) { first_data_line = false; continue; } // header row
            throw ParseError(line_no, "expected 'a,b,start,end'");
        }
        first_data_line = false;
        if (e.a == e.b) throw ParseError(line_no, "self-contact (a == b)");
        if (e.start > e.end) throw ParseError(line_no, "start > end");
        labels.note(e.a);
        labels.note(e.b);
        raw.push_back(e);
    }

    std::vector<ContactEvent> events;
    events.reserve(raw.size());
    if (pinned_nodes && labels.max_label() < *pinned_nodes) {
        // The pin covers every label: treat labels as node ids verbatim, so
        // isolated nodes and id assignments survive a write/read round-trip.
        for (const auto& r : raw) {
            events.push_back(
                {static_cast<NodeId>(r.a), static_cast<NodeId>(r.b), r.start, r.end});
        }
        return ContactTrace(std::move(events), *pinned_nodes);
    }
    labels.freeze();
    for (const auto& r : raw)
        events.push_back({labels[r.a], labels[r.b], r.start, r.end});
    std::uint32_t n = pinned_nodes.value_or(labels.size());
    if (n < labels.size())
        throw std::invalid_argument("'# nodes=' comment smaller than distinct node count");
    return ContactTrace(std::move(events), n);
}

ContactTrace parse_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trace file: " + path);
    return parse_csv(in);
}

void serialize_csv(std::ostream& out, const ContactTrace& trace) {
    std::string buf;
    buf += "# nodes=" + std::to_string(trace.node_count()) + "\n";
    buf += "a,b,start,end\n";
    for (const auto& e : trace.events()) {
        buf += std::to_string(e.a);
        buf += ',';
        buf += std::to_string(e.b);
        buf += ',';
        format_time(buf, e.start);
        buf += ',';
        format_time(buf, e.end);
        buf += '\n';
    }
    out << buf;
}

std::string serialize_csv(const ContactTrace& trace) {
    std::ostringstream out;
    serialize_csv(out, trace);
    return out.str();
}

ContactTrace parse_one_report(std::istream& in, std::optional<double> horizon_end) {
    struct OpenContact {
        double start;
        std::size_t line;
    };
    struct RawEvent {
        std::uint64_t a, b;
        double start, end;
    };
    std::vector<RawEvent> raw;
    std::map<std::pair<std::uint64_t, std::uint64_t>, OpenContact> open;
    LabelMap labels;

    std::string line;
    std::size_t line_no = 0;
    double last_time = -std::numeric_limits<double>::infinity();
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view v = trim(line);
        if (v.empty() || v.front() == '#') continue;

        std::istringstream fields{std::string(v)};
        std::string time_s, tag, a_s, b_s, dir;
        fields >> time_s >> tag >> a_s >> b_s >> dir;
        double t = 0;
        std::uint64_t a = 0, b = 0;
        if (fields.fail() || tag != "CONN" || !parse_double(time_s, t) ||
            !parse_u64(a_s, a) || !parse_u64(b_s, b) || (dir != "up" && dir != "down"))
            throw ParseError(line_no, "expected '<time> CONN <a> <b> up|down'");
        if (a == b) throw ParseError(line_no, "self-contact (a == b)");
        if (t < last_time) throw ParseError(line_no, "non-monotone timestamp");
        last_time = t;

        auto key = std::minmax(a, b);
        labels.note(a);
        labels.note(b);
        if (dir == "up") {
            open.emplace(key, OpenContact{t, line_no}); // duplicate up keeps the earliest start
        } else {
            auto it = open.find(key);
            if (it == open.end()) throw ParseError(line_no, "'down' without prior 'up' for this pair");
            raw.push_back({key.first, key.second, it->second.start, t});
            open.erase(it);
        }
    }

    const double close_at = horizon_end.value_or(
        std::isfinite(last_time) ? last_time : 0.0);
    for (const auto& [key, oc] : open) {
        if (close_at < oc.start)
            throw ParseError(oc.line, "horizon end precedes an unmatched 'up'");
        raw.push_back({key.first, key.second, oc.start, close_at});
    }

    labels.freeze();
    std::vector<ContactEvent> events;
    events.reserve(raw.size());
    for (const auto& r : raw)
        events.push_back({labels[r.a], labels[r.b], r.start, r.end});
    std::optional<std::pair<double, double>> horizon;
    if (horizon_end && !events.empty()) {
        double lo = events.front().start;
        for (const auto& e : events) lo = std::min(lo, e.start);
        horizon = {{lo, std::max(*horizon_end, last_time)}};
    }
    return ContactTrace(std::move(events), 0, horizon);
}

ContactTrace parse_one_report_file(const std::string& path, std::optional<double> horizon_end) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trace file: " + path);
    return parse_one_report(in, horizon_end);
}

} // namespace dtn
