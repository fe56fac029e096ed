// SPDX-License-Identifier: Apache-2.0
#pragma once

// Exact one-step distributions of the SEMO variants on tiny instances, by
// enumerating every random choice. Genomes are plain '0'/'1' strings and
// dominance is evaluated from scratch here, so nothing below shares code
// with the implementation under test.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace semo::testing {

using Distribution = std::map<std::string, double>;

struct CachedMember {
    std::string genome;
    int stored;
};

/// Outcome key of a cached population: sorted "genome:stored" entries.
std::string cached_key(std::vector<CachedMember> members);

/// Outcome key of a reevaluated population: sorted genomes.
std::string reeval_key(std::vector<std::string> genomes);

/// Next-population distribution of one cached SEMO iteration.
Distribution cached_step_distribution(const std::vector<CachedMember>& pop, double p);

/// Next-population distribution of one reevaluating SEMO iteration. With
/// `keep_extremes` the all-zeros / all-ones strings are put back when their
/// true value is missing afterwards.
Distribution reeval_step_distribution(const std::vector<std::string>& pop, double p, bool keep_extremes = false);

/// Distribution of noisy_variant outcomes over the n + 1 categories
/// {unchanged, flip bit 0, ..., flip bit n-1}.
std::vector<double> noise_categories(std::size_t n, double p);

} // namespace semo::testing
