// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

namespace semo {

/// Single-owner random stream. Identical seeds give identical draw sequences.
///
/// The engine is std::mt19937_64; bounded integers and Bernoulli trials are
/// computed here rather than through <random> distributions so the draw
/// protocol (and therefore every trajectory) is fixed across standard library
/// implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, bound). Lemire's multiply-shift with rejection.
    std::uint64_t uniform_below(std::uint64_t bound)
    {
        if (bound <= 1) {
            return 0;
        }
        auto x = next_u64();
        auto m = static_cast<unsigned __int128>(x) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                x = next_u64();
                m = static_cast<unsigned __int128>(x) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Always consumes exactly one 64-bit draw, including for p = 0 and p = 1.
    bool bernoulli(double p) { return uniform01() < p; }

    /// Child seed for stream `index` of `parent`. SplitMix64 finalizer over a
    /// golden-ratio-spaced counter, so children of one parent never collide in
    /// practice and derivation needs no shared state.
    static std::uint64_t derive(std::uint64_t parent, std::uint64_t index) noexcept
    {
        std::uint64_t z = parent + 0x9e3779b97f4a7c15ULL * (index + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace semo
