// SPDX-License-Identifier: Apache-2.0
#pragma once

// Reference checks that stay independent of the implementation paths they
// verify: brute-force enumeration and textbook statistics only.

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace semo::oracle {

using Values = std::vector<std::vector<std::int64_t>>;

/// True iff `subset` (indices into `values`) Pareto-dominates the multiset,
/// i.e. every value is componentwise <= some chosen value, and the chosen
/// values are pairwise incomparable (equal values count as comparable).
bool is_minimal_dominant(const Values& values, std::span<const std::size_t> subset);

/// Every sub-multiset (as a sorted index list) satisfying is_minimal_dominant,
/// found by enumerating all 2^|values| subsets. |values| must be <= 20.
std::vector<std::vector<std::size_t>> minimal_dominant_subsets(const Values& values);

struct ChiSquare {
    double statistic = 0;
    double critical = 0;
    double p_value = 1;
    std::size_t df = 0;
    bool passed = false;
};

/// Pearson goodness-of-fit of `observed` counts against `expected`
/// probabilities at significance `alpha`. Categories with zero expected
/// probability must have zero observations (else the test fails outright).
ChiSquare chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> expected, double alpha);

/// Total variation distance between two discrete distributions given as
/// outcome -> probability maps (missing keys mean probability 0).
double total_variation(const std::map<std::string, double>& a, const std::map<std::string, double>& b);

/// Normalizes counts to an empirical distribution.
std::map<std::string, double> empirical(const std::map<std::string, std::uint64_t>& counts);

} // namespace semo::oracle
