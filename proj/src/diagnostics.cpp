// SPDX-License-Identifier: Apache-2.0
#include "diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace semo {

namespace {

template <class Range, class Proj>
std::vector<std::int64_t> distinct_sorted(const Range& range, std::size_t n, Proj proj)
{
    std::vector<bool> seen(n + 1, false);
    for (const auto& item : range) {
        seen[static_cast<std::size_t>(proj(item))] = true;
    }
    std::vector<std::int64_t> out;
    for (std::size_t v = 0; v <= n; ++v) {
        if (seen[v]) {
            out.push_back(static_cast<std::int64_t>(v));
        }
    }
    return out;
}

bool covers_all(std::span<const std::int64_t> distinct, std::size_t n) { return distinct.size() == n + 1; }

} // namespace

std::vector<std::int64_t> true_values(const CachedPopulation& pop)
{
    return distinct_sorted(pop.members(), pop.n(), [](const CachedIndividual& m) { return m.genome.count_ones(); });
}

std::vector<std::int64_t> true_values(const ReevalPopulation& pop)
{
    return distinct_sorted(pop.members(), pop.n(), [](const Bitstring& m) { return m.count_ones(); });
}

std::vector<std::int64_t> stored_values(const CachedPopulation& pop)
{
    std::vector<std::int64_t> out;
    out.reserve(pop.size());
    for (const auto& m : pop.members()) {
        out.push_back(m.stored_value[0]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Covering [0..n] needs n + 1 members, so the common case is a size check.
bool pareto_covered(const CachedPopulation& pop)
{
    return pop.size() >= pop.n() + 1 && covers_all(true_values(pop), pop.n());
}

bool pareto_covered(const ReevalPopulation& pop)
{
    return pop.size() >= pop.n() + 1 && covers_all(true_values(pop), pop.n());
}

bool pareto_covered(const SemoProcess& process)
{
    return process.is_cached() ? pareto_covered(process.cached()) : pareto_covered(process.reeval());
}

bool extremes_found(const CachedPopulation& pop, ExtremesMode mode)
{
    const auto n = pop.n();
    if (mode == ExtremesMode::NoisyCached) {
        return pop.find_stored(0) != npos && pop.find_stored(static_cast<std::int64_t>(n)) != npos;
    }
    bool low = false;
    bool high = false;
    for (const auto& m : pop.members()) {
        low = low || m.genome.count_ones() == 0;
        high = high || m.genome.count_ones() == n;
    }
    return low && high;
}

bool extremes_found(const ReevalPopulation& pop, ExtremesMode mode)
{
    if (mode == ExtremesMode::NoisyCached) {
        throw UsageError("noisy extreme values are only defined for the cached variant");
    }
    bool low = false;
    bool high = false;
    for (const auto& m : pop.members()) {
        low = low || m.count_ones() == 0;
        high = high || m.count_ones() == pop.n();
    }
    return low && high;
}

bool extremes_found(const SemoProcess& process)
{
    return process.is_cached() ? extremes_found(process.cached(), ExtremesMode::NoisyCached)
                               : extremes_found(process.reeval(), ExtremesMode::TrueValues);
}

std::int64_t min_stored_value(const CachedPopulation& pop)
{
    for (std::int64_t v = 0; v <= static_cast<std::int64_t>(pop.n()); ++v) {
        if (pop.find_stored(v) != npos) {
            return v;
        }
    }
    return static_cast<std::int64_t>(pop.n());
}

std::int64_t potential_ell(const CachedPopulation& pop)
{
    const auto j = min_stored_value(pop);
    const auto& holder = pop.members()[pop.find_stored(j)];
    const bool exact = static_cast<std::int64_t>(holder.genome.count_ones()) == j;
    return j - (exact ? 1 : 0) + 1;
}

TraceSample sample(const SemoProcess& process)
{
    TraceSample s;
    s.t = process.iteration();
    const auto n = process.config().n;
    const auto values = process.is_cached() ? true_values(process.cached()) : true_values(process.reeval());
    s.L = values.size();
    s.d = n + static_cast<std::size_t>(values.front()) - static_cast<std::size_t>(values.back());
    s.covered = covers_all(values, n);
    s.extremes_true = values.front() == 0 && values.back() == static_cast<std::int64_t>(n);
    if (process.is_cached()) {
        const auto& pop = process.cached();
        s.j = min_stored_value(pop);
        s.ell = potential_ell(pop);
        s.extremes_noisy = extremes_found(pop, ExtremesMode::NoisyCached);
    }
    return s;
}

// ---------------------------------------------------------------------------

RunRecord run_until(SemoProcess& process, const StopPredicate& stop, std::uint64_t budget, TraceOptions trace)
{
    const auto& config = process.config();
    RunRecord rec;
    rec.seed = process.seed();
    rec.variant = config.variant;
    rec.n = config.n;
    rec.p = config.noise.rate();
    rec.keep_limit = config.keep_limit;
    rec.budget = budget;

    const auto start = process.iteration();
    auto observe = [&] {
        const auto t = process.iteration();
        if (trace.stride != 0 && (t - start) % trace.stride == 0) {
            rec.trace.push_back(sample(process));
        }
        if (rec.extremes.censored && extremes_found(process)) {
            rec.extremes = {t, false};
        }
        if (stop(process)) {
            rec.total = {t, false};
            return true;
        }
        return false;
    };

    bool done = observe();
    while (!done && process.iteration() - start < budget) {
        process.step();
        done = observe();
    }
    if (!done) {
        rec.total = {process.iteration(), true};
    }
    if (rec.extremes.censored) {
        rec.extremes.value = process.iteration();
    }
    rec.iterations = process.iteration();
    rec.evaluations = process.evaluations();
    rec.final_size = process.size();
    return rec;
}

RunRecord run_until_covered(SemoProcess& process, std::uint64_t budget, TraceOptions trace)
{
    return run_until(
        process, [](const SemoProcess& p) { return pareto_covered(p); }, budget, trace);
}

// ---------------------------------------------------------------------------

std::vector<std::string> check_cached_state(const CachedPopulation& pop)
{
    std::vector<std::string> out;
    const auto n = pop.n();
    std::vector<int> stored_hits(n + 1, 0);
    std::vector<int> true_hits(n + 1, 0);
    for (const auto& m : pop.members()) {
        const auto v = m.stored_value[0];
        const auto f = static_cast<std::int64_t>(m.genome.count_ones());
        if (++stored_hits[static_cast<std::size_t>(v)] == 2) {
            out.push_back("stored value " + std::to_string(v) + " held twice (V_t not one-to-one)");
        }
        if (++true_hits[static_cast<std::size_t>(f)] == 4) {
            out.push_back("more than 3 members with true value " + std::to_string(f));
        }
        if (std::abs(v - f) > 1) {
            out.push_back("stored value " + std::to_string(v) + " is more than 1 from true value " + std::to_string(f));
        }
    }
    if (pop.size() > n + 1) {
        out.push_back("population size " + std::to_string(pop.size()) + " exceeds n + 1");
    }
    return out;
}

std::vector<std::string> check_cached_transition(std::span<const std::int64_t> stored_before,
                                                 const CachedPopulation& after)
{
    std::vector<std::string> out;
    for (const auto v : stored_before) {
        if (after.find_stored(v) == npos) {
            out.push_back("stored value " + std::to_string(v) + " lost at iteration " +
                          std::to_string(after.iteration()));
        }
    }
    return out;
}

std::vector<std::string> check_reeval_step(const ReevalPopulation& after, const ReevalStepLog& log)
{
    std::vector<std::string> out;
    auto values = log.kept_values;
    std::sort(values.begin(), values.end());
    if (std::adjacent_find(values.begin(), values.end()) != values.end()) {
        out.push_back("elim kept two members with equal first components at iteration " +
                      std::to_string(after.iteration()));
    }
    if (log.kept_values.size() > after.n() + 1) {
        out.push_back("elim kept more than n + 1 members");
    }
    if (after.size() != log.kept_values.size() + log.extremes_appended) {
        out.push_back("population size does not match elim output");
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

std::optional<std::int64_t> field_of(const TraceSample& s, TraceField field)
{
    switch (field) {
    case TraceField::L:
        return static_cast<std::int64_t>(s.L);
    case TraceField::d:
        return static_cast<std::int64_t>(s.d);
    case TraceField::ell:
        return s.ell;
    }
    return std::nullopt;
}

struct Moments {
    std::size_t count = 0;
    double sum = 0.0;
    double sum_sq = 0.0;

    void add(double x)
    {
        ++count;
        sum += x;
        sum_sq += x * x;
    }

    DriftEstimate estimate(std::int64_t value, double z) const
    {
        DriftEstimate e;
        e.value = value;
        e.samples = count;
        e.mean = count ? sum / static_cast<double>(count) : 0.0;
        if (count > 1) {
            const auto var = std::max(0.0, (sum_sq - sum * e.mean) / static_cast<double>(count - 1));
            e.half_width = z * std::sqrt(var / static_cast<double>(count));
        }
        return e;
    }
};

template <class Sink>
void for_each_transition(std::span<const std::vector<TraceSample>> traces, TraceField field,
                         const ValueCondition& condition, Sink&& sink)
{
    if (traces.empty()) {
        throw UsageError("drift estimation needs at least one trace");
    }
    for (const auto& trace : traces) {
        for (std::size_t k = 0; k + 1 < trace.size(); ++k) {
            if (trace[k + 1].t != trace[k].t + 1) {
                continue;
            }
            const auto now = field_of(trace[k], field);
            const auto next = field_of(trace[k + 1], field);
            if (!now || !next) {
                throw UsageError("trace does not carry the requested field");
            }
            if (condition(*now)) {
                sink(*now, static_cast<double>(*next - *now));
            }
        }
    }
}

} // namespace

DriftReport estimate_drift(std::span<const std::vector<TraceSample>> traces, TraceField field,
                           const ValueCondition& condition, std::size_t min_samples, double z)
{
    std::map<std::int64_t, Moments> by_value;
    for_each_transition(traces, field, condition,
                        [&](std::int64_t value, double delta) { by_value[value].add(delta); });
    DriftReport report;
    for (const auto& [value, m] : by_value) {
        if (m.count < min_samples) {
            report.omitted.push_back(value);
        } else {
            report.per_value.push_back(m.estimate(value, z));
        }
    }
    return report;
}

DriftEstimate pooled_drift(std::span<const std::vector<TraceSample>> traces, TraceField field,
                           const ValueCondition& condition, double z)
{
    Moments m;
    for_each_transition(traces, field, condition, [&](std::int64_t, double delta) { m.add(delta); });
    return m.estimate(0, z);
}

} // namespace semo
