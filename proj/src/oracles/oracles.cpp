// SPDX-License-Identifier: Apache-2.0
#include "oracles.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <stdexcept>

namespace semo::oracle {

namespace {

bool leq(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b)
{
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) {
            return false;
        }
    }
    return true;
}

bool comparable(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b)
{
    return leq(a, b) || leq(b, a);
}

} // namespace

bool is_minimal_dominant(const Values& values, std::span<const std::size_t> subset)
{
    for (std::size_t a = 0; a < subset.size(); ++a) {
        for (std::size_t b = a + 1; b < subset.size(); ++b) {
            if (subset[a] == subset[b] || comparable(values[subset[a]], values[subset[b]])) {
                return false;
            }
        }
    }
    for (const auto& v : values) {
        bool covered = false;
        for (const auto i : subset) {
            covered = covered || leq(v, values[i]);
        }
        if (!covered) {
            return false;
        }
    }
    return true;
}

std::vector<std::vector<std::size_t>> minimal_dominant_subsets(const Values& values)
{
    if (values.size() > 20) {
        throw std::invalid_argument("brute-force oracle limited to 20 elements");
    }
    std::vector<std::vector<std::size_t>> out;
    const std::uint64_t total = std::uint64_t{1} << values.size();
    for (std::uint64_t mask = 1; mask < total; ++mask) {
        std::vector<std::size_t> subset;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (mask >> i & 1U) {
                subset.push_back(i);
            }
        }
        if (is_minimal_dominant(values, subset)) {
            out.push_back(std::move(subset));
        }
    }
    return out;
}

ChiSquare chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> expected, double alpha)
{
    if (observed.size() != expected.size() || observed.size() < 2) {
        throw std::invalid_argument("chi-square needs matching category counts (>= 2)");
    }
    double total = 0;
    for (const auto o : observed) {
        total += static_cast<double>(o);
    }
    ChiSquare out;
    std::size_t categories = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] <= 0) {
            if (observed[i] != 0) {
                out.statistic = INFINITY;
                out.p_value = 0;
                return out;
            }
            continue;
        }
        ++categories;
        const auto e = expected[i] * total;
        const auto diff = static_cast<double>(observed[i]) - e;
        out.statistic += diff * diff / e;
    }
    out.df = categories - 1;
    const boost::math::chi_squared dist(static_cast<double>(out.df));
    out.critical = boost::math::quantile(dist, 1.0 - alpha);
    out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
    out.passed = out.statistic <= out.critical;
    return out;
}

double total_variation(const std::map<std::string, double>& a, const std::map<std::string, double>& b)
{
    double sum = 0;
    for (const auto& [key, pa] : a) {
        const auto it = b.find(key);
        sum += std::abs(pa - (it == b.end() ? 0.0 : it->second));
    }
    for (const auto& [key, pb] : b) {
        if (a.find(key) == a.end()) {
            sum += pb;
        }
    }
    return sum / 2;
}

std::map<std::string, double> empirical(const std::map<std::string, std::uint64_t>& counts)
{
    double total = 0;
    for (const auto& [key, c] : counts) {
        total += static_cast<double>(c);
    }
    std::map<std::string, double> out;
    for (const auto& [key, c] : counts) {
        out[key] = static_cast<double>(c) / total;
    }
    return out;
}

} // namespace semo::oracle
