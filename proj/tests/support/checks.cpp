// SPDX-License-Identifier: Apache-2.0
#include "checks.hpp"

#include <algorithm>
#include <cmath>

namespace semo::testing {

void check_cached(const CachedPopulation& pop, const std::set<std::int64_t>& previous, InvariantTally& tally)
{
    ++tally.states;
    const auto members = pop.members();
    std::set<std::int64_t> stored;
    std::map<std::int64_t, int> per_true;
    for (const auto& m : members) {
        const auto v = m.stored_value[0];
        const auto f = static_cast<std::int64_t>(m.genome.count_ones());
        stored.insert(v);
        ++per_true[f];
        if (std::llabs(v - f) > 1) {
            ++tally.distance;
        }
    }
    if (stored.size() != members.size()) {
        ++tally.one_to_one;
    }
    if (!std::includes(stored.begin(), stored.end(), previous.begin(), previous.end())) {
        ++tally.monotone;
    }
    for (const auto& [f, count] : per_true) {
        if (count > 3) {
            ++tally.per_value;
        }
    }
    if (members.size() > pop.n() + 1) {
        ++tally.size;
    }
}

std::set<std::int64_t> stored_set(const CachedPopulation& pop)
{
    std::set<std::int64_t> out;
    for (const auto& m : pop.members()) {
        out.insert(m.stored_value[0]);
    }
    return out;
}

CachedPopulation make_cached(const std::vector<CachedMember>& members)
{
    const auto n = members.front().genome.size();
    std::vector<CachedIndividual> out;
    for (const auto& m : members) {
        out.push_back({Bitstring::parse(m.genome), one_min_max_value(m.stored, n)});
    }
    return CachedPopulation(n, std::move(out));
}

ReevalPopulation make_reeval(const std::vector<std::string>& genomes)
{
    std::vector<Bitstring> out;
    for (const auto& g : genomes) {
        out.push_back(Bitstring::parse(g));
    }
    return ReevalPopulation(genomes.front().size(), std::move(out));
}

Distribution sample_cached(const CachedPopulation& start, double p, std::uint64_t samples, std::uint64_t seed,
                           DominanceMode mode)
{
    Rng rng(seed);
    NoisyEvaluator evaluator{NoiseSpec(p)};
    std::map<std::string, std::uint64_t> counts;
    for (std::uint64_t s = 0; s < samples; ++s) {
        auto pop = start;
        cached_step(pop, evaluator, rng, mode);
        std::vector<CachedMember> members;
        for (const auto& m : pop.members()) {
            members.push_back({m.genome.to_string(), static_cast<int>(m.stored_value[0])});
        }
        ++counts[cached_key(members)];
    }
    Distribution out;
    for (const auto& [key, c] : counts) {
        out[key] = static_cast<double>(c) / static_cast<double>(samples);
    }
    return out;
}

Distribution sample_reeval(const ReevalPopulation& start, double p, std::uint64_t samples, std::uint64_t seed,
                           bool keep_extremes, DominanceMode mode)
{
    Rng rng(seed);
    NoisyEvaluator evaluator{NoiseSpec(p)};
    std::map<std::string, std::uint64_t> counts;
    for (std::uint64_t s = 0; s < samples; ++s) {
        auto pop = start;
        if (keep_extremes) {
            extreme_keeping_step(pop, evaluator, kUnboundedKeep, rng, mode);
        } else {
            reeval_step(pop, evaluator, rng, mode);
        }
        std::vector<std::string> genomes;
        for (const auto& g : pop.members()) {
            genomes.push_back(g.to_string());
        }
        ++counts[reeval_key(genomes)];
    }
    Distribution out;
    for (const auto& [key, c] : counts) {
        out[key] = static_cast<double>(c) / static_cast<double>(samples);
    }
    return out;
}

double tv_distance(const Distribution& a, const Distribution& b)
{
    double sum = 0;
    for (const auto& [key, pa] : a) {
        const auto it = b.find(key);
        sum += std::abs(pa - (it == b.end() ? 0.0 : it->second));
    }
    for (const auto& [key, pb] : b) {
        if (!a.contains(key)) {
            sum += pb;
        }
    }
    return sum / 2;
}

} // namespace semo::testing
