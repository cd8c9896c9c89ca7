// SPDX-License-Identifier: Apache-2.0
//
// Deterministic random number generation for the augmentation pipeline.
// PCG32 (O'Neill, "PCG: A Family of Simple Fast Space-Efficient Statistically
// Good Algorithms for Random Number Generation") seeded through SplitMix64
// finalizers. Outputs are identical across platforms and compilers, which is
// why the standard library engines/distributions are not used here.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace strokebench {

// SplitMix64 finalizer step (Steele, Lea, Flood 2014).
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Stable seed derivation for (master seed, image id, variant index) tuples.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = master;
    std::uint64_t h = splitmix64_next(s);
    s = h ^ (a * 0xD6E8FEB86659FD93ULL);
    h = splitmix64_next(s);
    s = h ^ (b * 0xCA5A826395121157ULL);
    return splitmix64_next(s);
}

class Pcg32 {
public:
    explicit Pcg32(std::uint64_t seed, std::uint64_t stream = 0x853C49E6748FEA9BULL) {
        std::uint64_t s = seed;
        state_ = 0;
        inc_ = (splitmix64_next(s) << 1u) | 1u;
        if (stream != 0x853C49E6748FEA9BULL) inc_ = (stream << 1u) | 1u;
        next_u32();
        state_ += splitmix64_next(s);
        next_u32();
    }

    std::uint32_t next_u32() {
        std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        std::uint32_t xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
    }

    // Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u32()) * 0x1p-32;
    }

    // Uniform in (0, 1); never returns an exact endpoint.
    double next_double_open() {
        return (static_cast<double>(next_u32()) + 0.5) * 0x1p-32;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    // Uniform integer in [0, n).
    std::uint32_t next_below(std::uint32_t n) {
        return static_cast<std::uint32_t>((static_cast<std::uint64_t>(next_u32()) * n) >> 32);
    }

    bool bernoulli(double p) {
        return next_double() < p;
    }

    // Box-Muller transform; one draw uses exactly two uniforms so that streams
    // stay reproducible regardless of how results are consumed.
    double normal(double mean = 0.0, double sigma = 1.0) {
        double u1 = next_double_open();
        double u2 = next_double();
        double r = std::sqrt(-2.0 * std::log(u1));
        return mean + sigma * r * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t state_;
    std::uint64_t inc_;
};

} // namespace strokebench
