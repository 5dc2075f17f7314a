#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>

// Deterministic random number utilities. Two flavours are provided:
//
//  * counter-based draws: a 64-bit key is hashed to one or two variates.
//    Draws are a pure function of the key, so values do not depend on
//    evaluation order and can be generated in parallel.
//  * Stream: a sequential splitmix64 generator for places where a plain
//    ordered stream is the natural fit (weight init, shuffling, noise).
//
// Everything here is exactly reproducible for a given seed.

namespace skelxai::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t x) {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t combine(std::uint64_t h, std::uint64_t v) {
    return mix64(h ^ (v + kGolden + (h << 6) + (h >> 2)));
}

// Hash-chains a path of integers onto a seed. Used to derive independent
// sub-seeds (per stage, per sample, per draw) from one master seed.
constexpr std::uint64_t derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = mix64(seed);
    for (std::uint64_t v : path) h = combine(h, v);
    return h;
}

// Uniform double in [0, 1) from a key.
inline double unit_from(std::uint64_t key) {
    return static_cast<double>(mix64(key) >> 11) * 0x1.0p-53;
}

// Pair of independent standard normals from one key (Box-Muller).
inline std::array<double, 2> gaussian_pair(std::uint64_t key) {
    const std::uint64_t s = mix64(key);
    // u1 in (0, 1] so the log is finite.
    const double u1 = static_cast<double>((s >> 11) + 1) * 0x1.0p-53;
    const double u2 = static_cast<double>(mix64(s) >> 11) * 0x1.0p-53;
    const double mag = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * 3.14159265358979323846 * u2;
    return {mag * std::cos(ang), mag * std::sin(ang)};
}

// Sequential generator (splitmix64).
class Stream {
public:
    explicit Stream(std::uint64_t seed) : state_(mix64(seed)) {}

    std::uint64_t next_u64() {
        state_ += kGolden;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
        const double u2 = next_unit();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * 3.14159265358979323846 * u2;
        spare_ = mag * std::sin(ang);
        have_spare_ = true;
        return mag * std::cos(ang);
    }

    // Uniform integer in [0, n). Modulo bias is irrelevant at our scales.
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace skelxai::rng
