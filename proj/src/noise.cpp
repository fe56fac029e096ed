// SPDX-License-Identifier: Apache-2.0
#include "noise.hpp"

#include "errors.hpp"

#include <cmath>
#include <string>

namespace semo {

NoiseSpec::NoiseSpec(double p) : rate_(p)
{
    if (std::isnan(p) || p < 0.0 || p > 1.0) {
        throw UsageError("noise rate must lie in [0, 1], got " + std::to_string(p));
    }
}

Bitstring noisy_variant(const Bitstring& x, NoiseSpec noise, Rng& rng)
{
    if (!rng.bernoulli(noise.rate())) {
        return x;
    }
    return x.flipped(static_cast<std::size_t>(rng.uniform_below(x.size())));
}

ObjectiveVector NoisyEvaluator::evaluate(const Bitstring& x, Rng& rng)
{
    return one_min_max_value(evaluate_ones(x, rng), x.size());
}

std::int64_t NoisyEvaluator::evaluate_ones(const Bitstring& x, Rng& rng)
{
    ++evaluations_;
    const auto ones = static_cast<std::int64_t>(x.count_ones());
    if (!rng.bernoulli(noise_.rate())) {
        return ones;
    }
    const auto pos = static_cast<std::size_t>(rng.uniform_below(x.size()));
    return x.test(pos) ? ones - 1 : ones + 1;
}

} // namespace semo
