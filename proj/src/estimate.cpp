#include "dtn/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"

namespace dtn {

namespace {

// Stands in for an infinite rate when a step has positive probability of
// costing nothing and no observed positive cost at all.
constexpr double kAllZeroRate = 1e15;

ResidualEstimate make_residual(std::vector<double> gaps) {
    if (gaps.empty()) {
        throw std::invalid_argument("residual estimate: no repeated contacts in the trace");
    }
    std::sort(gaps.begin(), gaps.end());
    ResidualEstimate r;
    r.prefix.resize(gaps.size() + 1);
    r.prefix[0] = 0.0;
    for (std::size_t k = 0; k < gaps.size(); ++k) {
        r.prefix[k + 1] = r.prefix[k] + gaps[k];
    }
    r.total = r.prefix.back();
    r.gaps = std::move(gaps);
    if (!(r.total > 0.0)) {
        throw std::invalid_argument("residual estimate: gaps sum to zero");
    }
    return r;
}

double sample_mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

} // namespace

std::string to_string(ModelKind kind) {
    switch (kind) {
    case ModelKind::empirical: return "empirical";
    case ModelKind::mixture: return "mixture";
    case ModelKind::homogeneous: return "homogeneous";
    }
    throw std::logic_error("unknown model kind");
}

ModelKind model_kind_from_string(const std::string& name) {
    if (name == "empirical") return ModelKind::empirical;
    if (name == "mixture") return ModelKind::mixture;
    if (name == "homogeneous") return ModelKind::homogeneous;
    throw std::invalid_argument("unknown model kind: " + name);
}

std::string to_string(ResidualMode mode) {
    switch (mode) {
    case ResidualMode::empirical: return "empirical";
    case ResidualMode::exponential: return "exponential";
    }
    throw std::logic_error("unknown residual mode");
}

ResidualMode residual_mode_from_string(const std::string& name) {
    if (name == "empirical") return ResidualMode::empirical;
    if (name == "exponential") return ResidualMode::exponential;
    throw std::invalid_argument("unknown residual mode: " + name);
}

double ResidualEstimate::cdf(double t) const {
    if (t <= 0.0) return 0.0;
    if (mode == ResidualMode::exponential) return -std::expm1(-rate() * t);
    // Gaps shorter than t are fully covered; longer ones contribute t each.
    const auto it = std::upper_bound(gaps.begin(), gaps.end(), t);
    const auto idx = static_cast<std::size_t>(it - gaps.begin());
    const double shorter = prefix[idx];
    const double longer = t * static_cast<double>(gaps.size() - idx);
    return std::min(1.0, (shorter + longer) / total);
}

ResidualEstimate estimate_residual(const ContactTrace& trace, ResidualMode mode) {
    // Start-to-start intervals of each pair; events are already start-sorted.
    std::unordered_map<std::uint64_t, double> last_start;
    std::vector<double> gaps;
    for (const ContactEvent& e : trace.events()) {
        const std::uint64_t key = (static_cast<std::uint64_t>(e.a) << 32) | e.b;
        const auto [it, fresh] = last_start.try_emplace(key, e.start);
        if (!fresh) {
            gaps.push_back(e.start - it->second);
            it->second = e.start;
        }
    }
    ResidualEstimate r = make_residual(std::move(gaps));
    r.mode = mode;
    return r;
}

DeltaModel fit_mixture(const DeltaSamples& s, double zero_eps) {
    if (s.n < 2) throw std::invalid_argument("fit_mixture: need at least 2 nodes");
    if (!(zero_eps >= 0.0)) throw std::invalid_argument("fit_mixture: zero_eps must be >= 0");
    DeltaModel m;
    m.kind = ModelKind::mixture;
    m.n = s.n;
    m.per_i.resize(s.n - 1);

    std::vector<std::uint32_t> missing;
    for (std::uint32_t i = 1; i < s.n; ++i) {
        const auto& v = s.per_i[i - 1];
        auto& c = m.per_i[i - 1];
        if (v.empty()) {
            c.interpolated = true;
            missing.push_back(i);
            continue;
        }
        double positive_sum = 0.0;
        std::size_t positive_count = 0;
        for (const double x : v) {
            if (x > zero_eps) {
                positive_sum += x;
                ++positive_count;
            }
        }
        c.con = static_cast<double>(v.size() - positive_count) / static_cast<double>(v.size());
        if (positive_count == 0) {
            c.all_zero = true;
            c.lambda = kAllZeroRate;
            m.warnings.push_back("step " + std::to_string(i) +
                                 ": every sample at zero; treating the step as free");
        } else {
            c.lambda = static_cast<double>(positive_count) / positive_sum;
        }
    }

    if (missing.size() == m.per_i.size()) {
        throw std::invalid_argument("fit_mixture: no spread steps observed");
    }
    for (const std::uint32_t i : missing) {
        // Nearest populated steps on each side; one-sided at the edges.
        std::int64_t lo = i - 1, hi = i + 1;
        while (lo >= 1 && m.per_i[lo - 1].interpolated) --lo;
        while (hi <= static_cast<std::int64_t>(s.n) - 1 && m.per_i[hi - 1].interpolated) ++hi;
        const bool has_lo = lo >= 1;
        const bool has_hi = hi <= static_cast<std::int64_t>(s.n) - 1;
        auto& c = m.per_i[i - 1];
        if (has_lo && has_hi) {
            const auto& a = m.per_i[lo - 1];
            const auto& b = m.per_i[hi - 1];
            const double w = static_cast<double>(i - lo) / static_cast<double>(hi - lo);
            c.con = (1.0 - w) * a.con + w * b.con;
            const double mean_wait = (1.0 - w) / a.lambda + w / b.lambda;
            c.lambda = mean_wait > 0.0 ? 1.0 / mean_wait : kAllZeroRate;
        } else {
            const auto& src = has_lo ? m.per_i[lo - 1] : m.per_i[hi - 1];
            c.con = src.con;
            c.lambda = src.lambda;
            c.all_zero = src.all_zero;
        }
        m.warnings.push_back("step " + std::to_string(i) +
                             ": no samples (censoring); parameters interpolated");
    }
    return m;
}

DeltaModel fit_empirical(const DeltaSamples& s) {
    if (s.n < 2) throw std::invalid_argument("fit_empirical: need at least 2 nodes");
    DeltaModel m;
    m.kind = ModelKind::empirical;
    m.n = s.n;
    m.samples = s.per_i;
    bool any = false;
    for (const auto& v : m.samples) any = any || !v.empty();
    if (!any) throw std::invalid_argument("fit_empirical: no spread steps observed");
    for (std::uint32_t i = 1; i < s.n; ++i) {
        if (!m.samples[i - 1].empty()) continue;
        // Borrow the nearest populated step rather than invent a shape.
        std::int64_t lo = i - 1, hi = i + 1;
        while (lo >= 1 && m.samples[lo - 1].empty()) --lo;
        while (hi <= static_cast<std::int64_t>(s.n) - 1 && m.samples[hi - 1].empty()) ++hi;
        const bool use_lo = lo >= 1 && (hi > static_cast<std::int64_t>(s.n) - 1 ||
                                        i - lo <= hi - static_cast<std::int64_t>(i));
        m.samples[i - 1] = use_lo ? m.samples[lo - 1] : m.samples[hi - 1];
        m.warnings.push_back("step " + std::to_string(i) +
                             ": no samples (censoring); copied the nearest step");
    }
    return m;
}

DeltaModel fit_homogeneous(const ContactTrace& trace, ResidualMode mode) {
    if (trace.node_count() < 2) {
        throw std::invalid_argument("fit_homogeneous: need at least 2 nodes");
    }
    DeltaModel m;
    m.kind = ModelKind::homogeneous;
    m.n = trace.node_count();
    m.residual = estimate_residual(trace, mode);
    return m;
}

DiscreteDist render_delta(const DeltaModel& m, std::uint32_t i, double dt, std::size_t len) {
    if (i < 1 || i >= m.n) throw std::out_of_range("render_delta: step out of range");
    switch (m.kind) {
    case ModelKind::mixture: {
        const MixtureComponent& c = m.per_i[i - 1];
        if (c.con >= 1.0 || c.all_zero) return dirac_zero(dt, len);
        DiscreteDist d = from_exponential(c.lambda, dt, len);
        for (double& x : d.mass) x *= 1.0 - c.con;
        d.tail *= 1.0 - c.con;
        d.mass[0] += c.con;
        d.atom0 = c.con;
        return d;
    }
    case ModelKind::homogeneous: {
        const double pairs = static_cast<double>(i) * static_cast<double>(m.n - i);
        std::vector<double> cdf(len);
        for (std::size_t k = 0; k < len; ++k) {
            const double f = m.residual.cdf(static_cast<double>(k + 1) * dt);
            cdf[k] = f >= 1.0 ? 1.0 : -std::expm1(pairs * std::log1p(-f));
        }
        return dist_from_cdf(cdf, dt, 0.0);
    }
    case ModelKind::empirical:
        return from_samples(m.samples[i - 1], dt, len);
    }
    throw std::logic_error("unknown model kind");
}

std::vector<double> per_i_means(const DeltaModel& m, double dt, std::size_t len) {
    std::vector<double> means(m.n - 1);
    for (std::uint32_t i = 1; i < m.n; ++i) {
        switch (m.kind) {
        case ModelKind::mixture: {
            const auto& c = m.per_i[i - 1];
            means[i - 1] = c.all_zero ? 0.0 : (1.0 - c.con) / c.lambda;
            break;
        }
        case ModelKind::empirical:
            means[i - 1] = sample_mean(m.samples[i - 1]);
            break;
        case ModelKind::homogeneous:
            means[i - 1] = mean(render_delta(m, i, dt, len));
            break;
        }
    }
    return means;
}

std::string model_to_json(const DeltaModel& m) {
    nlohmann::json j;
    j["kind"] = to_string(m.kind);
    j["n"] = m.n;
    switch (m.kind) {
    case ModelKind::mixture: {
        auto& arr = j["per_i"] = nlohmann::json::array();
        for (std::uint32_t i = 1; i < m.n; ++i) {
            const auto& c = m.per_i[i - 1];
            arr.push_back({{"i", i}, {"con", c.con}, {"lambda", c.lambda}});
        }
        break;
    }
    case ModelKind::homogeneous:
        j["gaps"] = m.residual.gaps;
        j["residual"] = to_string(m.residual.mode);
        break;
    case ModelKind::empirical:
        j["samples"] = m.samples;
        break;
    }
    return j.dump(2) + "\n";
}

DeltaModel model_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    DeltaModel m;
    m.kind = model_kind_from_string(j.at("kind").get<std::string>());
    m.n = j.at("n").get<std::uint32_t>();
    if (m.n < 2) throw std::invalid_argument("model: n must be >= 2");
    switch (m.kind) {
    case ModelKind::mixture: {
        m.per_i.resize(m.n - 1);
        std::vector<char> seen(m.n - 1, 0);
        for (const auto& e : j.at("per_i")) {
            const auto i = e.at("i").get<std::uint32_t>();
            if (i < 1 || i >= m.n) throw std::invalid_argument("model: step index out of range");
            if (seen[i - 1]) throw std::invalid_argument("model: duplicate step index");
            seen[i - 1] = 1;
            auto& c = m.per_i[i - 1];
            c.con = e.at("con").get<double>();
            c.lambda = e.at("lambda").get<double>();
            if (c.con < 0.0 || c.con > 1.0) throw std::invalid_argument("model: con outside [0,1]");
            if (!(c.lambda > 0.0)) throw std::invalid_argument("model: lambda must be positive");
            c.all_zero = c.con >= 1.0;
        }
        for (std::uint32_t i = 1; i < m.n; ++i) {
            if (!seen[i - 1]) {
                throw std::invalid_argument("model: missing step " + std::to_string(i));
            }
        }
        break;
    }
    case ModelKind::homogeneous:
        m.residual = make_residual(j.at("gaps").get<std::vector<double>>());
        if (j.contains("residual")) {
            m.residual.mode = residual_mode_from_string(j.at("residual").get<std::string>());
        }
        break;
    case ModelKind::empirical:
        m.samples = j.at("samples").get<std::vector<std::vector<double>>>();
        if (m.samples.size() != m.n - 1) {
            throw std::invalid_argument("model: samples must list n-1 steps");
        }
        break;
    }
    return m;
}

} // namespace dtn
