#include "dtn/analyze.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "dtn/io.hpp"

namespace dtn {

namespace {

double pearson(const std::vector<double>& x, const std::vector<double>& y, bool& degenerate) {
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        mx += x[k];
        my += y[k];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double dx = x[k] - mx;
        const double dy = y[k] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) {
        degenerate = true;
        return 0.0;
    }
    return sxy / std::sqrt(sxx * syy);
}

// Average ranks, ties sharing the mean of the positions they span.
std::vector<double> rank_transform(const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    std::size_t k = 0;
    while (k < order.size()) {
        std::size_t j = k;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[k]]) ++j;
        const double shared = 0.5 * static_cast<double>(k + j) + 1.0;
        for (std::size_t m = k; m <= j; ++m) r[order[m]] = shared;
        k = j + 1;
    }
    return r;
}

} // namespace

std::string to_string(CorrMethod method) {
    switch (method) {
    case CorrMethod::pearson: return "pearson";
    case CorrMethod::spearman: return "spearman";
    }
    throw std::logic_error("unknown correlation method");
}

CorrMethod corr_method_from_string(const std::string& name) {
    if (name == "pearson") return CorrMethod::pearson;
    if (name == "spearman") return CorrMethod::spearman;
    throw std::invalid_argument("unknown correlation method: " + name);
}

CorrelationReport contact_correlation(const ContactTrace& trace, double window,
                                      std::size_t grid_points,
                                      std::optional<double> window_start, CorrMethod method) {
    if (!(window > 0.0)) throw std::invalid_argument("contact_correlation: bad window");
    if (grid_points < 2) throw std::invalid_argument("contact_correlation: need >= 2 grid points");
    const double w0 = window_start.value_or(trace.t_min());
    const double w1 = w0 + window;
    const std::uint32_t n = trace.node_count();

    CorrelationReport rep;
    rep.window_start = w0;
    rep.window = window;
    rep.grid_points = grid_points;
    rep.method = method;
    rep.node_avg.assign(n, std::numeric_limits<double>::quiet_NaN());

    // Contact starts per pair, clipped to [w0, trace end]; a pair is active
    // if at least two starts fall inside the window.
    struct PairSeries {
        NodeId a, b;
        std::vector<double> residual; // time to next start, sampled on the grid
    };
    std::vector<PairSeries> active;
    {
        std::vector<std::vector<double>> starts; // keyed by dense pair index a*n+b
        std::vector<std::int64_t> index(static_cast<std::size_t>(n) * n, -1);
        for (const ContactEvent& e : trace.events()) {
            if (e.start < w0 || e.start > trace.t_max()) continue;
            auto& slot = index[static_cast<std::size_t>(e.a) * n + e.b];
            if (slot < 0) {
                slot = static_cast<std::int64_t>(starts.size());
                starts.emplace_back();
            }
            starts[static_cast<std::size_t>(slot)].push_back(e.start);
        }
        const double step = window / static_cast<double>(grid_points - 1);
        for (NodeId a = 0; a < n; ++a) {
            for (NodeId b = a + 1; b < n; ++b) {
                const auto slot = index[static_cast<std::size_t>(a) * n + b];
                if (slot < 0) continue;
                const auto& st = starts[static_cast<std::size_t>(slot)];
                const auto in_window = static_cast<std::size_t>(
                    std::upper_bound(st.begin(), st.end(), w1) - st.begin());
                if (in_window < 2) continue;
                PairSeries ps;
                ps.a = a;
                ps.b = b;
                ps.residual.resize(grid_points);
                for (std::size_t g = 0; g < grid_points; ++g) {
                    const double t = w0 + step * static_cast<double>(g);
                    const auto next = std::lower_bound(st.begin(), st.end(), t);
                    // No further contact: censor at the trace end.
                    ps.residual[g] = next == st.end() ? trace.t_max() - t : *next - t;
                }
                if (method == CorrMethod::spearman) {
                    ps.residual = rank_transform(ps.residual);
                }
                active.push_back(std::move(ps));
            }
        }
    }

    std::vector<std::vector<std::size_t>> by_node(n);
    for (std::size_t p = 0; p < active.size(); ++p) {
        by_node[active[p].a].push_back(p);
        by_node[active[p].b].push_back(p);
    }
    for (NodeId u = 0; u < n; ++u) {
        const auto& ids = by_node[u];
        if (ids.size() < 2) {
            rep.excluded.push_back(u);
            continue;
        }
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t x = 0; x < ids.size(); ++x) {
            for (std::size_t y = x + 1; y < ids.size(); ++y) {
                bool degenerate = false;
                const double rho =
                    pearson(active[ids[x]].residual, active[ids[y]].residual, degenerate);
                if (degenerate) continue;
                sum += rho;
                ++count;
            }
        }
        if (count == 0) {
            rep.excluded.push_back(u);
        } else {
            rep.node_avg[u] = sum / static_cast<double>(count);
        }
    }
    return rep;
}

std::vector<std::pair<double, double>> correlation_ccdf(const CorrelationReport& rep) {
    std::vector<double> vals;
    for (const double v : rep.node_avg) {
        if (!std::isnan(v)) vals.push_back(v);
    }
    std::vector<std::pair<double, double>> out;
    for (int k = 0; k <= 20; ++k) {
        const double thr = 0.05 * k;
        double above = 0.0;
        for (const double v : vals) above += v > thr ? 1.0 : 0.0;
        out.emplace_back(thr, vals.empty() ? 0.0 : above / static_cast<double>(vals.size()));
    }
    return out;
}

IndependenceResult t_delta_correlation(const std::vector<ColouringRun>& runs, std::uint32_t i) {
    if (i < 1) throw std::invalid_argument("t_delta_correlation: i must be >= 1");
    std::vector<double> t_i, d_i;
    for (const auto& run : runs) {
        if (run.colour_times.size() < i + 1) continue;
        t_i.push_back(run.colour_times[i - 1]);
        d_i.push_back(run.colour_times[i] - run.colour_times[i - 1]);
    }
    IndependenceResult res;
    res.pairs = t_i.size();
    if (res.pairs < 100) {
        res.degenerate = true;
        return res;
    }
    res.rho = pearson(t_i, d_i, res.degenerate);
    return res;
}

std::vector<double> mean_colour_times(const std::vector<ColouringRun>& runs, std::uint32_t n) {
    std::vector<double> sum(n, 0.0);
    std::vector<std::size_t> count(n, 0);
    for (const auto& run : runs) {
        for (std::size_t j = 0; j < run.colour_times.size() && j < n; ++j) {
            sum[j] += run.colour_times[j];
            count[j]++;
        }
    }
    std::vector<double> out(n, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t j = 0; j < n; ++j) {
        if (count[j] > 0) out[j] = sum[j] / static_cast<double>(count[j]);
    }
    return out;
}

std::vector<double> model_mean_colour_times(const DeltaModel& m, double dt, std::size_t len) {
    const auto means = per_i_means(m, dt, len);
    std::vector<double> out(m.n, 0.0);
    for (std::uint32_t i = 1; i < m.n; ++i) out[i] = out[i - 1] + means[i - 1];
    return out;
}

void write_delta_samples_csv(std::ostream& out, const DeltaSamples& s) {
    out << "i,delta_seconds\n";
    for (std::size_t i = 1; i < s.per_i.size() + 1; ++i) {
        for (const double v : s.per_i[i - 1]) {
            out << i << ',' << fmt_g12(v) << "\n";
        }
    }
}

void write_delta_ccdf_csv(std::ostream& out, const DeltaSamples& s) {
    out << "i,delta_seconds,ccdf\n";
    for (std::size_t i = 1; i < s.per_i.size() + 1; ++i) {
        std::vector<double> v = s.per_i[i - 1];
        if (v.empty()) continue;
        std::sort(v.begin(), v.end());
        const auto count = static_cast<double>(v.size());
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (j + 1 < v.size() && v[j + 1] == v[j]) continue;
            out << i << ',' << fmt_g12(v[j]) << ','
                << fmt_g12((count - static_cast<double>(j + 1)) / count) << "\n";
        }
    }
}

void write_correlation_csv(std::ostream& out, const CorrelationReport& rep) {
    out << "node,avg_corr\n";
    for (std::size_t u = 0; u < rep.node_avg.size(); ++u) {
        out << u << ',';
        if (std::isnan(rep.node_avg[u])) {
            out << "\n";
        } else {
            out << fmt_g12(rep.node_avg[u]) << "\n";
        }
    }
}

} // namespace dtn
