// SPDX-License-Identifier: Apache-2.0
#pragma once

// Ground-truth observers. These read true OneMinMax values of population
// members, which the algorithms themselves never do.

#include "algorithms.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace semo {

struct TraceSample {
    std::uint64_t t = 0;
    /// |f(P_t)|.
    std::size_t L = 0;
    /// n + min f(P_t) - max f(P_t).
    std::size_t d = 0;
    /// Cached variant only.
    std::optional<std::int64_t> ell;
    /// Minimum stored first component; cached variant only.
    std::optional<std::int64_t> j;
    bool covered = false;
    /// {0, n} within the stored values; cached variant only.
    std::optional<bool> extremes_noisy;
    bool extremes_true = false;

    friend bool operator==(const TraceSample&, const TraceSample&) = default;
};

/// Sorted distinct true values f(P_t).
std::vector<std::int64_t> true_values(const CachedPopulation& pop);
std::vector<std::int64_t> true_values(const ReevalPopulation& pop);

/// Sorted stored first components V_t(P_t).
std::vector<std::int64_t> stored_values(const CachedPopulation& pop);

bool pareto_covered(const CachedPopulation& pop);
bool pareto_covered(const ReevalPopulation& pop);
bool pareto_covered(const SemoProcess& process);

enum class ExtremesMode { NoisyCached, TrueValues };

/// NoisyCached: {0, n} within the stored first components. TrueValues:
/// {0, n} within f(P_t). NoisyCached on a reevaluating population throws
/// UsageError.
bool extremes_found(const CachedPopulation& pop, ExtremesMode mode);
bool extremes_found(const ReevalPopulation& pop, ExtremesMode mode);

/// The mode that defines T_ex for the process's variant.
bool extremes_found(const SemoProcess& process);

/// Minimum stored first component j_t.
std::int64_t min_stored_value(const CachedPopulation& pop);

/// j_t + 1, minus one when the member holding stored value j_t also has true
/// value j_t.
std::int64_t potential_ell(const CachedPopulation& pop);

TraceSample sample(const SemoProcess& process);

// ---------------------------------------------------------------------------
// Run records

struct StoppingTime {
    std::uint64_t value = 0;
    /// When set, `value` is the iteration at which the budget ran out and is
    /// only a lower bound.
    bool censored = true;

    friend bool operator==(const StoppingTime&, const StoppingTime&) = default;
};

struct RunRecord {
    std::uint64_t seed = 0;
    Variant variant = Variant::Cached;
    std::size_t n = 0;
    double p = 0.0;
    std::uint64_t keep_limit = 0;
    std::uint64_t budget = 0;
    StoppingTime total;
    StoppingTime extremes;
    std::uint64_t iterations = 0;
    std::uint64_t evaluations = 0;
    std::size_t final_size = 0;
    std::vector<TraceSample> trace;

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct TraceOptions {
    /// 0 disables tracing; 1 samples every iteration.
    std::uint64_t stride = 0;
};

using StopPredicate = std::function<bool(const SemoProcess&)>;

/// Steps `process` until `stop` holds or `budget` further iterations have
/// run. Both stop and the T_ex predicate are checked after every iteration
/// (and once before the first), independent of the trace stride.
RunRecord run_until(SemoProcess& process, const StopPredicate& stop, std::uint64_t budget,
                    TraceOptions trace = {});

/// run_until with pareto_covered as stop predicate.
RunRecord run_until_covered(SemoProcess& process, std::uint64_t budget, TraceOptions trace = {});

// ---------------------------------------------------------------------------
// Invariant checks

/// Lemma-level invariants of a single cached population: stored values
/// one-to-one, |V - f| <= 1, at most 3 members per true value, size <= n + 1.
/// Returns one message per violation.
std::vector<std::string> check_cached_state(const CachedPopulation& pop);

/// Stored-value set monotonicity between consecutive cached populations.
std::vector<std::string> check_cached_transition(std::span<const std::int64_t> stored_before,
                                                 const CachedPopulation& after);

/// After elim: kept values have distinct first components and size <= n + 1.
std::vector<std::string> check_reeval_step(const ReevalPopulation& after, const ReevalStepLog& log);

// ---------------------------------------------------------------------------
// Drift estimation

enum class TraceField { L, d, ell };

struct DriftEstimate {
    std::int64_t value = 0;
    std::size_t samples = 0;
    double mean = 0.0;
    /// Normal-approximation half width at the requested confidence.
    double half_width = 0.0;

    double lower() const noexcept { return mean - half_width; }
    double upper() const noexcept { return mean + half_width; }
};

struct DriftReport {
    std::vector<DriftEstimate> per_value;
    /// Values that met the condition but had fewer than min_samples transitions.
    std::vector<std::int64_t> omitted;
};

using ValueCondition = std::function<bool(std::int64_t)>;

/// Mean one-step change of `field`, grouped by its current value, over every
/// pair of consecutive samples (t, t + 1) whose current value satisfies
/// `condition`. Throws UsageError when `traces` is empty or a trace lacks the
/// field.
DriftReport estimate_drift(std::span<const std::vector<TraceSample>> traces, TraceField field,
                           const ValueCondition& condition, std::size_t min_samples = 2, double z = 1.959963984540054);

/// Same transitions as estimate_drift, pooled into one estimate (value = 0).
DriftEstimate pooled_drift(std::span<const std::vector<TraceSample>> traces, TraceField field,
                           const ValueCondition& condition, double z = 1.959963984540054);

} // namespace semo
