// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "core.hpp"

#include <cstdint>

namespace semo {

/// One-bit prior noise rate p in [0, 1].
class NoiseSpec {
public:
    /// Throws UsageError when p is NaN or outside [0, 1].
    explicit NoiseSpec(double p = 0.0);

    double rate() const noexcept { return rate_; }

private:
    double rate_;
};

/// With probability p, x with one uniformly chosen bit flipped; otherwise x.
///
/// Draw protocol: one Bernoulli(p) draw, always; then one uniform_below(n)
/// draw only when the flip happens.
Bitstring noisy_variant(const Bitstring& x, NoiseSpec noise, Rng& rng);

/// Noisy OneMinMax evaluation with an evaluation counter. Every evaluate call
/// is one fitness evaluation.
class NoisyEvaluator {
public:
    explicit NoisyEvaluator(NoiseSpec noise) : noise_(noise) {}

    NoiseSpec noise() const noexcept { return noise_; }
    std::uint64_t evaluations() const noexcept { return evaluations_; }

    /// one_min_max(noisy_variant(x)).
    ObjectiveVector evaluate(const Bitstring& x, Rng& rng);

    /// First component of evaluate(x) without materializing the noisy copy.
    /// Consumes exactly the same draws as evaluate.
    std::int64_t evaluate_ones(const Bitstring& x, Rng& rng);

private:
    NoiseSpec noise_;
    std::uint64_t evaluations_ = 0;
};

} // namespace semo
