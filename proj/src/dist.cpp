#include "dtn/dist.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
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

// Direct cost above this many multiply-adds switches convolve to the FFT path.
constexpr std::size_t kFftThreshold = std::size_t{1} << 20;

void fft_inplace(std::vector<std::complex<double>>& a, bool invert) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) {
            j ^= bit;
        }
        j ^= bit;
        if (i < j) {
            std::swap(a[i], a[j]);
        }
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (invert ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> step(std::cos(ang), std::sin(ang));
        for (std::size_t base = 0; base < n; base += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = a[base + k];
                const auto v = a[base + k + len / 2] * w;
                a[base + k] = u + v;
                a[base + k + len / 2] = u - v;
                w *= step;
            }
        }
    }
    if (invert) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& x : a) {
            x *= inv;
        }
    }
}

// Full linear convolution of two nonnegative mass vectors.
std::vector<double> linear_convolution(const std::vector<double>& f, const std::vector<double>& g) {
    const std::size_t out_len = f.size() + g.size() - 1;
    if (f.size() * g.size() < kFftThreshold) {
        std::vector<double> out(out_len, 0.0);
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double fi = f[i];
            if (fi == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < g.size(); ++j) {
                out[i + j] += fi * g[j];
            }
        }
        return out;
    }
    std::size_t n = 1;
    while (n < out_len) {
        n <<= 1;
    }
    std::vector<std::complex<double>> fa(n), ga(n);
    std::copy(f.begin(), f.end(), fa.begin());
    std::copy(g.begin(), g.end(), ga.begin());
    fft_inplace(fa, false);
    fft_inplace(ga, false);
    for (std::size_t i = 0; i < n; ++i) {
        fa[i] *= ga[i];
    }
    fft_inplace(fa, true);
    std::vector<double> out(out_len);
    for (std::size_t i = 0; i < out_len; ++i) {
        // Roundoff can leave tiny negatives; mass is nonnegative by construction.
        out[i] = std::max(0.0, fa[i].real());
    }
    return out;
}

} // namespace

DiscreteDist dirac_zero(double dt, std::size_t len) {
    require(dt > 0.0 && std::isfinite(dt), "dirac_zero: dt must be positive");
    require(len >= 1, "dirac_zero: len must be >= 1");
    DiscreteDist d;
    d.dt = dt;
    d.mass.assign(len, 0.0);
    d.mass[0] = 1.0;
    d.atom0 = 1.0;
    return d;
}

DiscreteDist from_exponential(double rate, double dt, std::size_t len) {
    require(rate > 0.0 && std::isfinite(rate), "from_exponential: rate must be positive");
    require(dt > 0.0 && std::isfinite(dt), "from_exponential: dt must be positive");
    require(len >= 1, "from_exponential: len must be >= 1");
    DiscreteDist d;
    d.dt = dt;
    d.mass.resize(len);
    for (std::size_t k = 0; k < len; ++k) {
        const double lo = rate * static_cast<double>(k) * dt;
        const double hi = rate * static_cast<double>(k + 1) * dt;
        d.mass[k] = std::exp(-lo) - std::exp(-hi);
    }
    d.tail = std::exp(-rate * static_cast<double>(len) * dt);
    return d;
}

DiscreteDist from_samples(std::span<const double> samples, double dt, std::size_t len) {
    require(dt > 0.0 && std::isfinite(dt), "from_samples: dt must be positive");
    require(len >= 1, "from_samples: len must be >= 1");
    require(!samples.empty(), "from_samples: no samples");
    DiscreteDist d;
    d.dt = dt;
    d.mass.assign(len, 0.0);
    // Count first and divide once: weights stay exact ratios, so an atom of
    // k zeros out of n equals k/n bit for bit wherever it is recomputed.
    std::vector<std::size_t> counts(len, 0);
    std::size_t zeros = 0;
    std::size_t beyond = 0;
    for (const double v : samples) {
        require(v >= 0.0, "from_samples: negative sample");
        if (v == 0.0) {
            ++zeros;
            ++counts[0];
            continue;
        }
        // Bin k covers (k*dt, (k+1)*dt], so v lands in bin ceil(v/dt) - 1.
        double edge = std::ceil(v / dt);
        if (edge < 1.0) {
            edge = 1.0;
        }
        if (edge > static_cast<double>(len)) {
            ++beyond;
        } else {
            ++counts[static_cast<std::size_t>(edge) - 1];
        }
    }
    const auto total = static_cast<double>(samples.size());
    for (std::size_t k = 0; k < len; ++k) {
        d.mass[k] = static_cast<double>(counts[k]) / total;
    }
    d.atom0 = static_cast<double>(zeros) / total;
    d.tail = static_cast<double>(beyond) / total;
    return d;
}

DiscreteDist convolve(const DiscreteDist& f, const DiscreteDist& g, std::size_t max_len) {
    require(!f.mass.empty() && !g.mass.empty(), "convolve: empty operand");
    require(f.dt == g.dt, "convolve: dt mismatch");
    const std::size_t len = max_len != 0 ? max_len : std::max(f.mass.size(), g.mass.size());

    const std::vector<double> full = linear_convolution(f.mass, g.mass);
    DiscreteDist out;
    out.dt = f.dt;
    out.mass.assign(len, 0.0);
    double overflow = 0.0;
    for (std::size_t k = 0; k < full.size(); ++k) {
        if (k < len) {
            out.mass[k] = full[k];
        } else {
            overflow += full[k];
        }
    }
    // Anything involving either tail stays in the tail.
    out.tail = f.tail + g.tail - f.tail * g.tail + overflow;
    out.atom0 = f.atom0 * g.atom0;
    return out;
}

std::vector<double> to_cdf(const DiscreteDist& f) {
    std::vector<double> cdf(f.mass.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < f.mass.size(); ++k) {
        acc += f.mass[k];
        cdf[k] = std::min(acc, 1.0);
    }
    return cdf;
}

DiscreteDist dist_from_cdf(std::span<const double> cdf, double dt, double atom0) {
    require(!cdf.empty(), "dist_from_cdf: empty cdf");
    require(dt > 0.0 && std::isfinite(dt), "dist_from_cdf: dt must be positive");
    DiscreteDist d;
    d.dt = dt;
    d.mass.resize(cdf.size());
    double prev = 0.0;
    for (std::size_t k = 0; k < cdf.size(); ++k) {
        d.mass[k] = std::max(0.0, cdf[k] - prev);
        prev = cdf[k];
    }
    d.tail = std::max(0.0, 1.0 - cdf.back());
    d.atom0 = atom0;
    return d;
}

std::vector<double> survival_power_min(std::span<const double> cdf, std::uint64_t m) {
    require(m >= 1, "survival_power_min: m must be >= 1");
    std::vector<double> out(cdf.size());
    const double mm = static_cast<double>(m);
    for (std::size_t k = 0; k < cdf.size(); ++k) {
        const double F = cdf[k];
        out[k] = F >= 1.0 ? 1.0 : -std::expm1(mm * std::log1p(-F));
    }
    return out;
}

std::vector<double> survival_power_kfold(std::span<const double> cdf, std::uint64_t k) {
    require(k >= 1, "survival_power_kfold: k must be >= 1");
    std::vector<double> out(cdf.size());
    const double kk = static_cast<double>(k);
    for (std::size_t i = 0; i < cdf.size(); ++i) {
        out[i] = std::pow(cdf[i], kk);
    }
    return out;
}

DiscreteDist min_of(const DiscreteDist& f, std::uint64_t m) {
    require(m >= 1, "min_of: m must be >= 1");
    const auto cdf = to_cdf(f);
    const auto min_cdf = survival_power_min(cdf, m);
    const double a0 =
        f.atom0 >= 1.0 ? 1.0 : -std::expm1(static_cast<double>(m) * std::log1p(-f.atom0));
    return dist_from_cdf(min_cdf, f.dt, a0);
}

double mean(const DiscreteDist& f) {
    // Midpoint rule on the grid part; the zero atom contributes nothing.
    double acc = (f.mass.empty() ? 0.0 : f.mass[0] - f.atom0) * 0.5 * f.dt;
    for (std::size_t k = 1; k < f.mass.size(); ++k) {
        acc += f.mass[k] * (static_cast<double>(k) + 0.5) * f.dt;
    }
    return acc;
}

double total_mass(const DiscreteDist& f) {
    return std::accumulate(f.mass.begin(), f.mass.end(), 0.0) + f.tail;
}

void validate(const DiscreteDist& f, double tol) {
    require(f.dt > 0.0 && std::isfinite(f.dt), "dist: dt must be positive");
    require(!f.mass.empty(), "dist: empty mass vector");
    for (const double m : f.mass) {
        require(std::isfinite(m) && m >= -tol, "dist: negative bin mass");
    }
    require(std::isfinite(f.tail) && f.tail >= -tol, "dist: negative tail");
    require(f.atom0 >= -tol && f.atom0 <= f.mass[0] + tol, "dist: atom exceeds first bin");
    require(std::abs(total_mass(f) - 1.0) <= tol, "dist: total mass != 1");
}

void write_dist_csv(std::ostream& out, const DiscreteDist& f) {
    out << "# atom0=" << fmt_g12(f.atom0) << "\n";
    out << "# tail=" << fmt_g12(f.tail) << "\n";
    out << "t,pdf,cdf\n";
    double acc = 0.0;
    for (std::size_t k = 0; k < f.mass.size(); ++k) {
        acc += f.mass[k];
        out << fmt_g12(static_cast<double>(k + 1) * f.dt) << ',' << fmt_g12(f.mass[k] / f.dt)
            << ',' << fmt_g12(std::min(acc, 1.0)) << "\n";
    }
}

} // namespace dtn
