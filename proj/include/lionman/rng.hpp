#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace lionman {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic random source (splitmix64). Identical seeds produce identical
/// streams on every platform. Substreams for independent samples come from
/// fork(), so per-sample work can run in any order without changing results.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), state_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return splitmix64_next(state_); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Log-uniform over [lo, hi]; requires lo > 0.
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    std::uint64_t below(std::uint64_t n) { return n ? next_u64() % n : 0; }

    /// Standard normal via Box-Muller. No cached spare: forked streams stay aligned.
    double gaussian() {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(6.28318530717958647692528676655900577 * u2);
    }

    std::vector<double> gaussian_vector(std::size_t n) {
        std::vector<double> v(n);
        for (auto& x : v) x = gaussian();
        return v;
    }

    /// Independent substream k of this source (depends on the seed only).
    Rng fork(std::uint64_t k) const {
        std::uint64_t s = seed_ ^ (0x5851f42d4c957f2dULL * (k + 1));
        splitmix64_next(s);
        return Rng(s);
    }

private:
    std::uint64_t seed_;
    std::uint64_t state_;
};

} // namespace lionman
