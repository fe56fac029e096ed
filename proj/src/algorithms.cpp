// SPDX-License-Identifier: Apache-2.0
#include "algorithms.hpp"

#include <cassert>
#include <string>

namespace semo {

// ---------------------------------------------------------------------------
// CachedPopulation

CachedPopulation::CachedPopulation(std::size_t n, std::vector<CachedIndividual> members)
    : n_(n), members_(std::move(members))
{
    if (members_.empty()) {
        throw UsageError("cached population must be nonempty");
    }
    const auto top = static_cast<std::int64_t>(n_);
    for (const auto& m : members_) {
        if (m.genome.size() != n_) {
            throw UsageError("genome length differs from n");
        }
        const auto& v = m.stored_value;
        if (v.dimension() != 2 || v[0] < 0 || v[0] > top || v[0] + v[1] != top) {
            throw UsageError("stored value " + v.to_string() + " is not a OneMinMax vector for n = " +
                             std::to_string(n_));
        }
    }
    rebuild_index();
}

void CachedPopulation::rebuild_index()
{
    by_stored_.assign(n_ + 1, npos);
    for (std::size_t i = 0; i < members_.size(); ++i) {
        auto& slot = by_stored_[static_cast<std::size_t>(members_[i].stored_value[0])];
        if (slot != npos) {
            throw UsageError("stored first components must be pairwise distinct");
        }
        slot = i;
    }
}

std::size_t CachedPopulation::find_stored(std::int64_t value) const noexcept
{
    if (value < 0 || value > static_cast<std::int64_t>(n_)) {
        return npos;
    }
    return by_stored_[static_cast<std::size_t>(value)];
}

CachedPopulation cached_init(std::size_t n, NoisyEvaluator& evaluator, Rng& rng)
{
    auto genome = Bitstring::random(n, rng);
    auto value = evaluator.evaluate(genome, rng);
    std::vector<CachedIndividual> members;
    members.push_back({std::move(genome), std::move(value)});
    return CachedPopulation(n, std::move(members));
}

namespace {

struct GeneralDecision {
    bool accepted = false;
    std::vector<std::size_t> removed;
};

GeneralDecision decide_general(std::span<const CachedIndividual> members, const ObjectiveVector& w)
{
    GeneralDecision d;
    for (const auto& m : members) {
        if (strictly_dominates(m.stored_value, w)) {
            return d;
        }
    }
    d.accepted = true;
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (weakly_dominates(w, members[i].stored_value)) {
            d.removed.push_back(i);
        }
    }
    return d;
}

} // namespace

CachedStepLog cached_step(CachedPopulation& pop, NoisyEvaluator& evaluator, Rng& rng, DominanceMode mode)
{
    CachedStepLog log;
    auto& members = pop.members_;
    log.parent_index = static_cast<std::size_t>(rng.uniform_below(members.size()));
    auto offspring = mutate_one_bit(members[log.parent_index].genome, rng, log.flipped_pos);
    log.offspring_ones = static_cast<std::int64_t>(offspring.count_ones());
    auto w = evaluator.evaluate(offspring, rng);
    log.offspring_value = w[0];

    if (mode == DominanceMode::General) {
        auto decision = decide_general(members, w);
        log.accepted = decision.accepted;
        log.removed = decision.removed.size();
        if (decision.accepted) {
            CachedIndividual newcomer{std::move(offspring), std::move(w)};
            if (decision.removed.empty()) {
                members.push_back(std::move(newcomer));
            } else {
                const auto slot = decision.removed.front();
                members[slot] = std::move(newcomer);
                std::vector<CachedIndividual> next;
                next.reserve(members.size());
                std::size_t r = 1;
                for (std::size_t i = 0; i < members.size(); ++i) {
                    if (r < decision.removed.size() && decision.removed[r] == i) {
                        ++r;
                        continue;
                    }
                    next.push_back(std::move(members[i]));
                }
                members = std::move(next);
            }
            pop.rebuild_index();
        }
    } else {
        // Equal component sums: nothing strictly dominates w, and w weakly
        // dominates exactly the member holding the same first component.
        const auto slot = pop.find_stored(w[0]);
#ifndef NDEBUG
        {
            const auto general = decide_general(members, w);
            assert(general.accepted);
            assert(slot == npos ? general.removed.empty()
                                : (general.removed.size() == 1 && general.removed.front() == slot));
        }
#endif
        log.accepted = true;
        const auto key = static_cast<std::size_t>(w[0]);
        if (slot == npos) {
            members.push_back({std::move(offspring), std::move(w)});
            pop.by_stored_[key] = members.size() - 1;
        } else {
            log.removed = 1;
            members[slot] = {std::move(offspring), std::move(w)};
        }
    }
    ++pop.iteration_;
    return log;
}

// ---------------------------------------------------------------------------
// elim

std::vector<std::size_t> random_order(std::size_t count, Rng& rng)
{
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = count; i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.uniform_below(i));
        std::swap(order[i - 1], order[j]);
    }
    return order;
}

OneMinMaxElimination elim_one_min_max(std::span<const Bitstring> elements, NoisyEvaluator& evaluator, Rng& rng)
{
    if (elements.empty()) {
        throw UsageError("elim requires a nonempty multiset");
    }
    const auto n = elements.front().size();
    const auto order = random_order(elements.size(), rng);

    OneMinMaxElimination out;
    out.first_values.resize(elements.size());
    // Acceptance log with tombstones; its surviving entries, in order, are
    // the kept list of the general procedure.
    std::vector<std::size_t> accepted;
    std::vector<bool> alive;
    accepted.reserve(elements.size());
    alive.reserve(elements.size());
    std::vector<std::size_t> holder(n + 1, npos);

    for (const auto i : order) {
        const auto v = evaluator.evaluate_ones(elements[i], rng);
        out.first_values[i] = v;
        auto& h = holder[static_cast<std::size_t>(v)];
        if (h != npos) {
            alive[h] = false;
        }
        h = accepted.size();
        accepted.push_back(i);
        alive.push_back(true);
    }
    for (std::size_t k = 0; k < accepted.size(); ++k) {
        if (alive[k]) {
            out.kept.push_back(accepted[k]);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// ReevalPopulation

ReevalPopulation::ReevalPopulation(std::size_t n, std::vector<Bitstring> members) : n_(n), members_(std::move(members))
{
    if (members_.empty()) {
        throw UsageError("population must be nonempty");
    }
    for (const auto& m : members_) {
        if (m.size() != n_) {
            throw UsageError("genome length differs from n");
        }
    }
}

ReevalPopulation reeval_init(std::size_t n, Rng& rng)
{
    std::vector<Bitstring> members;
    members.push_back(Bitstring::random(n, rng));
    return ReevalPopulation(n, std::move(members));
}

ReevalStepLog reeval_step(ReevalPopulation& pop, NoisyEvaluator& evaluator, Rng& rng, DominanceMode mode)
{
    ReevalStepLog log;
    auto& members = pop.members_;
    log.parent_index = static_cast<std::size_t>(rng.uniform_below(members.size()));
    members.push_back(mutate_one_bit(members[log.parent_index], rng, log.flipped_pos));
    log.evaluated = members.size();

    std::vector<std::size_t> kept;
    if (mode == DominanceMode::General) {
        auto result = elim(
            members.size(), [&](std::size_t i) { return evaluator.evaluate(members[i], rng); }, rng);
        kept = std::move(result.kept);
        for (const auto i : kept) {
            log.kept_values.push_back(result.values[i][0]);
        }
    } else {
        auto result = elim_one_min_max(members, evaluator, rng);
        kept = std::move(result.kept);
        for (const auto i : kept) {
            log.kept_values.push_back(result.first_values[i]);
        }
    }

    std::vector<Bitstring> next;
    next.reserve(kept.size());
    for (const auto i : kept) {
        next.push_back(std::move(members[i]));
    }
    members = std::move(next);
    ++pop.iteration_;
    return log;
}

ReevalStepLog extreme_keeping_step(ReevalPopulation& pop, NoisyEvaluator& evaluator, std::uint64_t keep_limit,
                                   Rng& rng, DominanceMode mode)
{
    const auto executed = pop.iteration();
    auto log = reeval_step(pop, evaluator, rng, mode);
    if (executed < keep_limit) {
        bool has_zero = false;
        bool has_top = false;
        for (const auto& m : pop.members_) {
            has_zero = has_zero || m.count_ones() == 0;
            has_top = has_top || m.count_ones() == pop.n_;
        }
        if (!has_zero) {
            pop.members_.push_back(Bitstring(pop.n_));
            ++log.extremes_appended;
        }
        if (!has_top) {
            pop.members_.push_back(Bitstring::ones(pop.n_));
            ++log.extremes_appended;
        }
    }
    return log;
}

// ---------------------------------------------------------------------------
// SemoProcess

namespace {

void check_config(const AlgorithmConfig& config)
{
    if (config.n == 0) {
        throw UsageError("problem size n must be at least 1");
    }
}

std::variant<CachedPopulation, ReevalPopulation> initial_population(const AlgorithmConfig& config,
                                                                    NoisyEvaluator& evaluator, Rng& rng)
{
    check_config(config);
    if (config.variant == Variant::Cached) {
        return cached_init(config.n, evaluator, rng);
    }
    return reeval_init(config.n, rng);
}

} // namespace

SemoProcess::SemoProcess(const AlgorithmConfig& config, std::uint64_t seed)
    : config_(config), rng_(seed), evaluator_(config.noise),
      population_(initial_population(config_, evaluator_, rng_))
{
}

SemoProcess::SemoProcess(const AlgorithmConfig& config, std::uint64_t seed, CachedPopulation initial)
    : config_(config), rng_(seed), evaluator_(config.noise), population_(std::move(initial))
{
    check_config(config_);
    if (config_.variant != Variant::Cached || cached().n() != config_.n) {
        throw UsageError("cached initial population requires the cached variant with matching n");
    }
}

SemoProcess::SemoProcess(const AlgorithmConfig& config, std::uint64_t seed, ReevalPopulation initial)
    : config_(config), rng_(seed), evaluator_(config.noise), population_(std::move(initial))
{
    check_config(config_);
    if (config_.variant == Variant::Cached || reeval().n() != config_.n) {
        throw UsageError("reevaluating initial population requires a reevaluating variant with matching n");
    }
}

void SemoProcess::step()
{
    switch (config_.variant) {
    case Variant::Cached:
        cached_step(std::get<CachedPopulation>(population_), evaluator_, rng_, config_.mode);
        break;
    case Variant::Reeval:
        reeval_step(std::get<ReevalPopulation>(population_), evaluator_, rng_, config_.mode);
        break;
    case Variant::ExtremeKeeping:
        extreme_keeping_step(std::get<ReevalPopulation>(population_), evaluator_, config_.keep_limit, rng_,
                             config_.mode);
        break;
    }
}

std::uint64_t SemoProcess::iteration() const noexcept
{
    return std::visit([](const auto& p) { return p.iteration(); }, population_);
}

std::size_t SemoProcess::size() const noexcept
{
    return std::visit([](const auto& p) { return p.size(); }, population_);
}

const CachedPopulation& SemoProcess::cached() const
{
    if (const auto* p = std::get_if<CachedPopulation>(&population_)) {
        return *p;
    }
    throw UsageError("process does not run the cached variant");
}

const ReevalPopulation& SemoProcess::reeval() const
{
    if (const auto* p = std::get_if<ReevalPopulation>(&population_)) {
        return *p;
    }
    throw UsageError("process runs the cached variant");
}

std::string_view to_string(Variant v) noexcept
{
    switch (v) {
    case Variant::Cached:
        return "cached";
    case Variant::Reeval:
        return "reeval";
    case Variant::ExtremeKeeping:
        return "keep";
    }
    return "unknown";
}

} // namespace semo
