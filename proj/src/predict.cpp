#include "dtn/predict.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <stdexcept>

#include "dtn/io.hpp"

namespace dtn {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) {
        throw std::invalid_argument(msg);
    }
}

using StepRenderer = std::function<DiscreteDist(std::uint32_t, double, std::size_t)>;

// Render every step on a refined grid, chain them by convolution, average
// the chained CDFs, then sample the result back onto the requested grid.
LatencyCurve chain_average(const StepRenderer& render, std::uint32_t n, double dt, std::size_t len,
                           const PredictOptions& opts, std::vector<std::string>& warnings) {
    require(n >= 2, "latency: need at least 2 nodes");
    require(dt > 0.0 && std::isfinite(dt), "latency: dt must be positive");
    require(len >= 1, "latency: len must be >= 1");

    std::size_t r = opts.refine;
    if (r == 0) {
        r = 1;
        while (r < 16 && len * (r << 1) <= opts.max_bins) r <<= 1;
    }
    require(len * r <= opts.max_bins, "latency: refine * len exceeds max_bins");

    std::size_t out_len = len;
    for (;;) {
        const std::size_t internal_len = out_len * r;
        const double internal_dt = dt / static_cast<double>(r);

        std::vector<double> fr(internal_len, 0.0);
        std::vector<std::vector<double>> per_i;
        double f0 = 0.0;
        DiscreteDist cur;
        for (std::uint32_t i = 2; i <= n; ++i) {
            const DiscreteDist step = render(i - 1, internal_dt, internal_len);
            cur = i == 2 ? step : convolve(cur, step, internal_len);
            auto cdf = to_cdf(cur);
            for (std::size_t k = 0; k < internal_len; ++k) fr[k] += cdf[k];
            f0 += cur.atom0;
            if (opts.keep_per_i) per_i.push_back(std::move(cdf));
        }
        const double scale = 1.0 / static_cast<double>(n - 1);
        for (double& v : fr) v *= scale;
        f0 *= scale;

        const double deficit = 1.0 - fr.back();
        if (deficit > opts.tail_target && opts.auto_extend && internal_len * 2 <= opts.max_bins) {
            out_len *= 2;
            continue;
        }
        if (deficit > opts.tail_target) {
            warnings.push_back("grid covers only " + std::to_string(1.0 - deficit) +
                               " of the latency mass; extend the horizon");
        }

        LatencyCurve curve;
        curve.dt = dt;
        curve.f0 = f0;
        curve.fr.resize(out_len);
        for (std::size_t k = 0; k < out_len; ++k) curve.fr[k] = fr[(k + 1) * r - 1];
        if (opts.keep_per_i) {
            curve.per_i.resize(per_i.size());
            for (std::size_t j = 0; j < per_i.size(); ++j) {
                curve.per_i[j].resize(out_len);
                for (std::size_t k = 0; k < out_len; ++k) {
                    curve.per_i[j][k] = per_i[j][(k + 1) * r - 1];
                }
            }
        }
        return curve;
    }
}

// out += sum_k probs(k) * base^k, truncated once the probability mass left is
// below tail_eps. Returns false if k_max was hit first.
bool geometric_power_series(const std::function<double(std::uint32_t)>& prob,
                            const std::vector<double>& base_cdf, double base_atom,
                            std::uint32_t k_max, double tail_eps, std::vector<double>& out_cdf,
                            double& out_atom) {
    out_cdf.assign(base_cdf.size(), 0.0);
    out_atom = 0.0;
    std::vector<double> powk = base_cdf;
    double atomk = base_atom;
    double pmass = 0.0;
    for (std::uint32_t k = 1; k <= k_max; ++k) {
        const double p = prob(k);
        for (std::size_t t = 0; t < out_cdf.size(); ++t) out_cdf[t] += p * powk[t];
        out_atom += p * atomk;
        pmass += p;
        if (1.0 - pmass < tail_eps) return true;
        for (std::size_t t = 0; t < powk.size(); ++t) powk[t] *= base_cdf[t];
        atomk *= base_atom;
    }
    return false;
}

} // namespace

double middle_phase_prob(std::uint32_t i, std::uint32_t k, std::uint32_t a, std::uint32_t n,
                         std::uint32_t s) {
    require(k >= 1, "middle_phase_prob: k must be >= 1");
    require(a < i && i + s < n, "middle_phase_prob: step outside the middle phase");
    const double denom = static_cast<double>(n - s - a);
    const double head = static_cast<double>(n - s - i) / denom;
    return head * std::pow(static_cast<double>(i - a) / denom, k - 1);
}

double end_phase_prob(std::uint32_t i, std::uint32_t k, std::uint32_t a) {
    require(k >= 1, "end_phase_prob: k must be >= 1");
    require(a < i, "end_phase_prob: step not past the budget");
    const double head = static_cast<double>(a) / static_cast<double>(i);
    return head * std::pow(static_cast<double>(i - a) / static_cast<double>(i), k - 1);
}

LatencyCurve epidemic_latency(const DeltaModel& m, double dt, std::size_t len,
                              const PredictOptions& opts) {
    std::vector<std::string> warnings = m.warnings;
    LatencyCurve curve = chain_average(
        [&m](std::uint32_t i, double idt, std::size_t ilen) { return render_delta(m, i, idt, ilen); },
        m.n, dt, len, opts, warnings);
    curve.warnings = std::move(warnings);
    return curve;
}

std::uint32_t solitary_count(std::span<const double> delta_means) {
    require(!delta_means.empty(), "solitary_count: no steps");
    const std::uint32_t n = static_cast<std::uint32_t>(delta_means.size()) + 1;
    std::uint32_t s = 0;
    for (std::uint32_t i = 1; 2 * i < n; ++i) {
        if (delta_means[n - i - 1] > 2.0 * delta_means[i - 1]) s = i;
    }
    return s;
}

LatencyCurve multicopy_latency(const DeltaModel& m, const MultiCopyParams& p, double dt,
                               std::size_t len, const PredictOptions& opts) {
    require(p.copies >= 1, "multicopy: need at least one copy");
    require(p.k_max >= 1, "multicopy: k_max must be >= 1");
    const std::uint32_t n = m.n;
    const auto a = static_cast<std::uint32_t>(std::min<std::uint64_t>(p.copies, n));
    std::uint32_t s = p.solitary_override ? *p.solitary_override
                                          : solitary_count(per_i_means(m, dt, len));
    s = std::min(s, n - 1);

    std::vector<std::string> warnings = m.warnings;
    if (s > 0 && a + s > n) {
        warnings.push_back("replication budget covers the stragglers; middle phase empty");
    }

    bool truncated = false;
    const auto render = [&](std::uint32_t i, double idt, std::size_t ilen) {
        DiscreteDist step = render_delta(m, i, idt, ilen);
        if (i <= a) return step; // budget not yet spent
        std::function<double(std::uint32_t)> prob;
        DiscreteDist base;
        if (i + s >= n) {
            // Only stragglers remain; attempts repeat this very step.
            prob = [&](std::uint32_t k) { return end_phase_prob(i, k, a); };
            base = std::move(step);
        } else {
            // Race over the a holders; each attempt costs a budget-step wait.
            prob = [&](std::uint32_t k) { return middle_phase_prob(i, k, a, n, s); };
            base = render_delta(m, a, idt, ilen);
        }
        std::vector<double> cdf;
        double atom = 0.0;
        if (!geometric_power_series(prob, to_cdf(base), base.atom0, p.k_max, p.tail_eps, cdf,
                                    atom)) {
            truncated = true;
        }
        return dist_from_cdf(cdf, idt, atom);
    };

    LatencyCurve curve = chain_average(render, n, dt, len, opts, warnings);
    if (truncated) {
        warnings.push_back("attempt series truncated at k_max before reaching tail_eps");
    }
    curve.warnings = std::move(warnings);
    return curve;
}

double delivery_ratio(const LatencyCurve& c, double ttl) {
    require(!c.fr.empty(), "delivery_ratio: empty curve");
    if (ttl < 0.0) return 0.0;
    if (ttl == 0.0) return c.f0;
    const double pos = ttl / c.dt;
    if (pos >= static_cast<double>(c.fr.size())) return c.fr.back();
    const auto k = static_cast<std::size_t>(pos);
    const double left = k == 0 ? c.f0 : c.fr[k - 1];
    const double right = c.fr[k];
    return left + (pos - static_cast<double>(k)) * (right - left);
}

FitComparison compare_to_samples(const LatencyCurve& c, std::span<const double> latencies) {
    require(!latencies.empty(), "compare_to_samples: no samples");
    std::vector<double> x(latencies.begin(), latencies.end());
    for (const double v : x) {
        require(std::isfinite(v) && v >= 0.0, "compare_to_samples: latencies must be finite");
    }
    std::sort(x.begin(), x.end());
    const double inv = 1.0 / static_cast<double>(x.size());
    FitComparison out;
    out.samples = x.size();
    double gap_sum = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double f = delivery_ratio(c, x[j]);
        const double lo = static_cast<double>(j) * inv;
        const double hi = static_cast<double>(j + 1) * inv;
        out.ks = std::max({out.ks, std::abs(f - lo), std::abs(f - hi)});
        gap_sum += std::abs(f - 0.5 * (lo + hi));
    }
    out.mean_abs_gap = gap_sum * inv;
    return out;
}

double two_sample_ks(std::span<const double> a, std::span<const double> b) {
    require(!a.empty() && !b.empty(), "two_sample_ks: empty sample set");
    std::vector<double> xs(a.begin(), a.end());
    std::vector<double> ys(b.begin(), b.end());
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    const double na = static_cast<double>(xs.size());
    const double nb = static_cast<double>(ys.size());
    double d = 0.0;
    std::size_t ia = 0, ib = 0;
    while (ia < xs.size() && ib < ys.size()) {
        const double x = std::min(xs[ia], ys[ib]);
        while (ia < xs.size() && xs[ia] <= x) ++ia;
        while (ib < ys.size() && ys[ib] <= x) ++ib;
        d = std::max(d, std::abs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb));
    }
    return d;
}

double curve_ks(const LatencyCurve& a, const LatencyCurve& b) {
    double d = std::abs(a.f0 - b.f0);
    const auto scan = [&](const LatencyCurve& grid) {
        for (std::size_t k = 0; k < grid.fr.size(); ++k) {
            const double t = static_cast<double>(k + 1) * grid.dt;
            d = std::max(d, std::abs(delivery_ratio(a, t) - delivery_ratio(b, t)));
        }
    };
    scan(a);
    scan(b);
    return d;
}

void write_curve_csv(std::ostream& out, const LatencyCurve& c) {
    out << "t,F_R\n";
    out << "0," << fmt_g12(c.f0) << "\n";
    for (std::size_t k = 0; k < c.fr.size(); ++k) {
        out << fmt_g12(static_cast<double>(k + 1) * c.dt) << ',' << fmt_g12(c.fr[k]) << "\n";
    }
}

} // namespace dtn
