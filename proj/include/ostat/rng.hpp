#ifndef OSTAT_RNG_HPP
#define OSTAT_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>

namespace ostat {

/// SplitMix64 finalizer. Used only for seed derivation, never as a stream.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Child seed for a numbered role under a parent seed.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t role) noexcept {
    return mix64(parent ^ mix64(role + 0x632be59bd9b4e019ULL));
}

/// FNV-1a over the role name, so roles can be spelled out at call sites.
constexpr std::uint64_t role_id(std::string_view name) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t derive_seed(std::uint64_t parent, std::string_view role) noexcept {
    return derive_seed(parent, role_id(role));
}

/// The library's random source: a 64-bit Mersenne Twister (std::mt19937_64,
/// whose output sequence is fixed by the standard) with hand-written
/// transforms, so sample paths do not depend on the standard library's
/// distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1).
    double uniform_open01() {
        for (;;) {
            const double u = uniform01();
            if (u > 0.0) return u;
        }
    }

    /// Uniform integer in [lo, hi], unbiased (rejection on the top range).
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
        const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
        if (span == UINT64_MAX) return static_cast<std::int64_t>(engine_());
        const std::uint64_t range = span + 1;
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % range);
        std::uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return lo + static_cast<std::int64_t>(r % range);
    }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Standard normal via the Marsaglia polar method (second variate discarded).
    double standard_normal() {
        for (;;) {
            const double u = 2.0 * uniform01() - 1.0;
            const double v = 2.0 * uniform01() - 1.0;
            const double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
};

}  // namespace ostat

#endif  // OSTAT_RNG_HPP
