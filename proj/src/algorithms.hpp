// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "core.hpp"
#include "errors.hpp"
#include "noise.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace semo {

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

/// How acceptance and removal tests are decided. The general mode applies the
/// dominance relations literally; the OneMinMax mode exploits that all values
/// have equal component sums (no strict dominance, weak dominance is equality).
/// Both modes consume identical random draws and produce identical member
/// order, so trajectories coincide for a shared seed.
enum class DominanceMode { General, OneMinMaxFastPath };

// ---------------------------------------------------------------------------
// SEMO without reevaluation

struct CachedStepLog;
struct ReevalStepLog;

struct CachedIndividual {
    Bitstring genome;
    /// Noisy value taken when the individual entered the population.
    ObjectiveVector stored_value;
};

/// Population of the SEMO without reevaluation. Stored first components are
/// pairwise distinct, which makes an index by stored value well defined.
class CachedPopulation {
public:
    /// Throws UsageError if members is empty, a stored value is not a
    /// OneMinMax vector for size n, or two stored first components coincide.
    CachedPopulation(std::size_t n, std::vector<CachedIndividual> members);

    std::size_t n() const noexcept { return n_; }
    std::size_t size() const noexcept { return members_.size(); }
    std::span<const CachedIndividual> members() const noexcept { return members_; }
    std::uint64_t iteration() const noexcept { return iteration_; }

    /// Index of the member whose stored first component is `value`, or npos.
    std::size_t find_stored(std::int64_t value) const noexcept;

private:
    friend CachedStepLog cached_step(CachedPopulation&, NoisyEvaluator&, Rng&, DominanceMode);

    void rebuild_index();

    std::size_t n_;
    std::vector<CachedIndividual> members_;
    std::vector<std::size_t> by_stored_;
    std::uint64_t iteration_ = 0;
};

/// What happened in one iteration of the cached SEMO.
struct CachedStepLog {
    std::size_t parent_index = 0;
    std::size_t flipped_pos = 0;
    std::int64_t offspring_ones = 0;
    /// First component of the offspring's noisy value w.
    std::int64_t offspring_value = 0;
    bool accepted = false;
    /// Members removed because w weakly dominated their stored value.
    std::size_t removed = 0;
};

/// Uniform genome, evaluated once.
CachedPopulation cached_init(std::size_t n, NoisyEvaluator& evaluator, Rng& rng);

/// One iteration: uniform parent, one-bit mutation, one noisy evaluation,
/// acceptance unless some stored value strictly dominates w, removal of every
/// member whose stored value w weakly dominates. The offspring takes the slot
/// of the first removed member, or is appended if nothing was removed.
CachedStepLog cached_step(CachedPopulation& pop, NoisyEvaluator& evaluator, Rng& rng,
                          DominanceMode mode = DominanceMode::OneMinMaxFastPath);

// ---------------------------------------------------------------------------
// elim

/// Uniformly random permutation of [0, count) by Fisher-Yates (count - 1 draws).
std::vector<std::size_t> random_order(std::size_t count, Rng& rng);

struct Elimination {
    /// Indices into the input multiset, in acceptance order.
    std::vector<std::size_t> kept;
    /// Value used for each input element, indexed like the input.
    std::vector<ObjectiveVector> values;
    std::vector<std::size_t> visit_order;
};

/// Minimal Pareto-dominant sub-multiset of a multiset of `count` elements.
///
/// Elements are visited in a uniformly random order and each is evaluated
/// exactly once, in visit order, by `evaluate(index)`. A visited element is
/// skipped iff a value in the append-only record strictly dominates its
/// value. Otherwise every kept element whose value it weakly dominates is
/// dropped, it is kept, and its value is recorded. Recorded values stay even
/// when their element is later dropped.
template <class Evaluate>
Elimination elim(std::size_t count, Evaluate&& evaluate, Rng& rng)
{
    if (count == 0) {
        throw UsageError("elim requires a nonempty multiset");
    }
    Elimination out;
    out.visit_order = random_order(count, rng);
    out.values.resize(count);
    std::vector<ObjectiveVector> record;
    for (const auto i : out.visit_order) {
        out.values[i] = evaluate(i);
        const auto& v = out.values[i];
        const bool beaten = std::any_of(record.begin(), record.end(),
                                        [&](const ObjectiveVector& r) { return strictly_dominates(r, v); });
        if (beaten) {
            continue;
        }
        std::erase_if(out.kept, [&](std::size_t j) { return weakly_dominates(v, out.values[j]); });
        out.kept.push_back(i);
        record.push_back(v);
    }
    return out;
}

struct OneMinMaxElimination {
    std::vector<std::size_t> kept;
    std::vector<std::int64_t> first_values;
};

/// elim on noisy OneMinMax evaluations of `elements`. Same draws, same kept
/// order as elim() with evaluator.evaluate, in linear time.
OneMinMaxElimination elim_one_min_max(std::span<const Bitstring> elements, NoisyEvaluator& evaluator,
                                      Rng& rng);

// ---------------------------------------------------------------------------
// SEMO with reevaluation

class ReevalPopulation {
public:
    /// Throws UsageError if members is empty or lengths differ from n.
    ReevalPopulation(std::size_t n, std::vector<Bitstring> members);

    std::size_t n() const noexcept { return n_; }
    std::size_t size() const noexcept { return members_.size(); }
    std::span<const Bitstring> members() const noexcept { return members_; }
    std::uint64_t iteration() const noexcept { return iteration_; }

private:
    friend ReevalStepLog reeval_step(ReevalPopulation&, NoisyEvaluator&, Rng&, DominanceMode);
    friend ReevalStepLog extreme_keeping_step(ReevalPopulation&, NoisyEvaluator&, std::uint64_t, Rng&,
                                              DominanceMode);

    std::size_t n_;
    std::vector<Bitstring> members_;
    std::uint64_t iteration_ = 0;
};

struct ReevalStepLog {
    std::size_t parent_index = 0;
    std::size_t flipped_pos = 0;
    /// |P_t| + 1.
    std::size_t evaluated = 0;
    /// First components of the values elim used for the kept members, in
    /// member order (before any extreme re-append).
    std::vector<std::int64_t> kept_values;
    std::size_t extremes_appended = 0;
};

ReevalPopulation reeval_init(std::size_t n, Rng& rng);

/// One iteration: uniform parent, one-bit mutation, then elim over the
/// population plus the offspring (offspring last in input order).
ReevalStepLog reeval_step(ReevalPopulation& pop, NoisyEvaluator& evaluator, Rng& rng,
                          DominanceMode mode = DominanceMode::OneMinMaxFastPath);

inline constexpr std::uint64_t kUnboundedKeep = std::numeric_limits<std::uint64_t>::max();

/// reeval_step, then, while fewer than `keep_limit` iterations had been executed
/// before this one, re-append the all-zeros and/or all-ones string for each
/// extreme true value (0 or n) missing from the population. No draws are
/// consumed by the re-append.
ReevalStepLog extreme_keeping_step(ReevalPopulation& pop, NoisyEvaluator& evaluator, std::uint64_t keep_limit,
                                   Rng& rng, DominanceMode mode = DominanceMode::OneMinMaxFastPath);

// ---------------------------------------------------------------------------
// Process driver

enum class Variant { Cached, Reeval, ExtremeKeeping };

struct AlgorithmConfig {
    std::size_t n = 1;
    NoiseSpec noise{};
    Variant variant = Variant::Cached;
    /// K for the extreme-keeping variant; kUnboundedKeep means always.
    std::uint64_t keep_limit = 0;
    DominanceMode mode = DominanceMode::OneMinMaxFastPath;
};

/// One trial: configuration, random stream, evaluation counter, population.
class SemoProcess {
public:
    /// Uniform initial genome drawn from a stream seeded with `seed`.
    SemoProcess(const AlgorithmConfig& config, std::uint64_t seed);
    SemoProcess(const AlgorithmConfig& config, std::uint64_t seed, CachedPopulation initial);
    SemoProcess(const AlgorithmConfig& config, std::uint64_t seed, ReevalPopulation initial);

    void step();

    const AlgorithmConfig& config() const noexcept { return config_; }
    std::uint64_t seed() const noexcept { return rng_.seed(); }
    std::uint64_t iteration() const noexcept;
    std::uint64_t evaluations() const noexcept { return evaluator_.evaluations(); }
    std::size_t size() const noexcept;

    bool is_cached() const noexcept { return std::holds_alternative<CachedPopulation>(population_); }
    /// Throw UsageError when the variant does not match.
    const CachedPopulation& cached() const;
    const ReevalPopulation& reeval() const;

private:
    AlgorithmConfig config_;
    Rng rng_;
    NoisyEvaluator evaluator_;
    std::variant<CachedPopulation, ReevalPopulation> population_;
};

std::string_view to_string(Variant v) noexcept;

} // namespace semo
