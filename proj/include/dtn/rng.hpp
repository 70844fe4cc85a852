#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dtn {

// splitmix64 finaliser; used to derive independent engine seeds from
// (root seed, task tag) pairs so that every Monte Carlo task draws from
// its own stream regardless of execution order.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t tag) {
    // Asymmetric on purpose: (root, tag) and (tag, root) must give different
    // streams, and root == tag must not collapse to a constant.
    return splitmix64(splitmix64(root ^ 0x6a09e667f3bcc909ULL) ^
                      (tag * 0x9e3779b97f4a7c15ULL + 0xbb67ae8584caa73bULL));
}

// mt19937_64 is fully specified by the standard, but the std::*_distribution
// adaptors are not, so sampling is done by hand to keep outputs byte-stable
// across standard library versions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // uniform double in [0, 1)
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // exponential with the given rate; uses -log1p(-u) so u = 0 is safe
    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

    bool bernoulli(double p) { return uniform() < p; }

    // unbiased integer in [0, n), n >= 1 (Lemire's multiply-shift rejection)
    std::uint64_t below(std::uint64_t n) {
        unsigned __int128 m = static_cast<unsigned __int128>(eng_()) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t threshold = -n % n;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(eng_()) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

private:
    std::mt19937_64 eng_;
};

} // namespace dtn
