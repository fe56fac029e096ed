// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "checks.hpp"
#include "diagnostics.hpp"

using namespace semo;

TEST_CASE("value observers")
{
    const auto pop = testing::make_cached({{"0000", 0}, {"1100", 3}, {"1110", 2}, {"1111", 4}});
    CHECK(true_values(pop) == std::vector<std::int64_t>{0, 2, 3, 4});
    CHECK(stored_values(pop) == std::vector<std::int64_t>{0, 2, 3, 4});
    CHECK_FALSE(pareto_covered(pop));
    CHECK(extremes_found(pop, ExtremesMode::NoisyCached));
    CHECK(extremes_found(pop, ExtremesMode::TrueValues));
    CHECK(min_stored_value(pop) == 0);

    // Stored 4 sits on a genome with three ones: noisy extremes differ from true ones.
    const auto noisy = testing::make_cached({{"0000", 0}, {"1110", 4}});
    CHECK(extremes_found(noisy, ExtremesMode::NoisyCached));
    CHECK_FALSE(extremes_found(noisy, ExtremesMode::TrueValues));

    const auto reeval = testing::make_reeval({"000", "100", "110", "111", "011"});
    CHECK(true_values(reeval) == std::vector<std::int64_t>{0, 1, 2, 3});
    CHECK(pareto_covered(reeval));
    CHECK(extremes_found(reeval, ExtremesMode::TrueValues));
    CHECK_THROWS_AS(extremes_found(reeval, ExtremesMode::NoisyCached), UsageError);
}

TEST_CASE("potential ell by hand")
{
    // j = 0 held by a genome of true value 0: ell = 0 + 1 - 1.
    CHECK(potential_ell(testing::make_cached({{"0000", 0}})) == 0);
    // j = 0 held by a genome of true value 1: ell = 0 + 1.
    CHECK(potential_ell(testing::make_cached({{"1000", 0}})) == 1);
    CHECK(potential_ell(testing::make_cached({{"1100", 2}, {"1110", 3}})) == 2);
    CHECK(potential_ell(testing::make_cached({{"1000", 2}, {"1110", 3}})) == 3);
}

namespace {

// Change of ell predicted from the state before a step and the offspring,
// worked out case by case from the definition.
std::int64_t predicted_delta(const CachedPopulation& before, std::int64_t w, std::int64_t offspring_ones)
{
    const auto j = min_stored_value(before);
    const auto holder = before.members()[before.find_stored(j)];
    const std::int64_t i_before = static_cast<std::int64_t>(holder.genome.count_ones()) == j ? 1 : 0;
    const std::int64_t i_after = offspring_ones == w ? 1 : 0;
    if (w > j) {
        return 0;
    }
    if (w == j) {
        return i_before - i_after;
    }
    return (w - j) - i_after + i_before;
}

} // namespace

TEST_CASE("ell replay: every step matches the case formula and +1 moves need a misevaluation at j")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        NoisyEvaluator ev{NoiseSpec(1.0 / 20)};
        auto pop = cached_init(20, ev, rng);
        for (int t = 0; t < 3000; ++t) {
            const auto before = pop;
            const auto ell = potential_ell(pop);
            const auto j = min_stored_value(pop);
            const auto log = cached_step(pop, ev, rng);
            const auto delta = potential_ell(pop) - ell;
            REQUIRE(delta == predicted_delta(before, log.offspring_value, log.offspring_ones));
            if (delta > 0) {
                CHECK(delta == 1);
                CHECK(log.offspring_value == j);
                CHECK(log.offspring_ones != log.offspring_value);
            }
        }
    }
}

TEST_CASE("state checks flag violations")
{
    CHECK(check_cached_state(testing::make_cached({{"0000", 0}, {"1100", 2}})).empty());
    CHECK(check_cached_state(testing::make_cached({{"0000", 2}})).size() == 1);

    const auto after = testing::make_cached({{"0000", 0}, {"1100", 2}});
    const std::vector<std::int64_t> ok{0};
    const std::vector<std::int64_t> lost{0, 3};
    CHECK(check_cached_transition(ok, after).empty());
    CHECK(check_cached_transition(lost, after).size() == 1);
}

TEST_CASE("run_until: zero budget is censored at the start")
{
    AlgorithmConfig config;
    config.n = 16;
    SemoProcess process(config, 3);
    const auto rec = run_until_covered(process, 0);
    CHECK(rec.total.censored);
    CHECK(rec.total.value == 0);
    CHECK(rec.extremes.censored);
    CHECK(rec.iterations == 0);
    CHECK(rec.evaluations == 1);
}

TEST_CASE("run_until: noiseless small run finishes with matching counters")
{
    for (const auto variant : {Variant::Cached, Variant::Reeval}) {
        AlgorithmConfig config;
        config.n = 8;
        config.variant = variant;
        SemoProcess process(config, 1);
        const auto rec = run_until_covered(process, 100000, {1});
        CHECK_FALSE(rec.total.censored);
        CHECK_FALSE(rec.extremes.censored);
        CHECK(rec.extremes.value <= rec.total.value);
        CHECK(rec.iterations == rec.total.value);
        CHECK(rec.final_size == 9);
        CHECK(rec.trace.size() == rec.total.value + 1);
        CHECK(rec.trace.front().t == 0);
        CHECK(rec.trace.back().covered);
        CHECK(rec.trace.back().L == 9);
        CHECK(rec.trace.back().d == 0);
        CHECK(rec.trace.back().ell.has_value() == (variant == Variant::Cached));
    }
}

TEST_CASE("trace stride keeps every S-th iteration")
{
    AlgorithmConfig config;
    config.n = 10;
    SemoProcess process(config, 5);
    const auto rec = run_until(
        process, [](const SemoProcess&) { return false; }, 50, {7});
    CHECK(rec.total.censored);
    CHECK(rec.total.value == 50);
    REQUIRE(rec.trace.size() == 8);
    for (std::size_t i = 0; i < rec.trace.size(); ++i) {
        CHECK(rec.trace[i].t == 7 * i);
    }
}

namespace {

std::vector<TraceSample> make_trace(const std::vector<std::pair<std::uint64_t, std::size_t>>& points)
{
    std::vector<TraceSample> out;
    for (const auto& [t, L] : points) {
        TraceSample s;
        s.t = t;
        s.L = L;
        out.push_back(s);
    }
    return out;
}

} // namespace

TEST_CASE("drift estimation on hand-made traces")
{
    const std::vector<std::vector<TraceSample>> traces{
        make_trace({{0, 5}, {1, 4}, {2, 3}, {3, 4}}),
        make_trace({{0, 5}, {1, 4}, {5, 2}}),
    };
    const auto all = [](std::int64_t) { return true; };
    const auto report = estimate_drift(traces, TraceField::L, all, 1);
    REQUIRE(report.per_value.size() == 3);
    CHECK(report.per_value[0].value == 3);
    CHECK(report.per_value[0].mean == doctest::Approx(1.0));
    CHECK(report.per_value[1].value == 4);
    // Only (t=1, t=2) from the first trace; (1, 5) is not consecutive.
    CHECK(report.per_value[1].samples == 1);
    CHECK(report.per_value[1].mean == doctest::Approx(-1.0));
    CHECK(report.per_value[2].value == 5);
    CHECK(report.per_value[2].samples == 2);
    CHECK(report.per_value[2].mean == doctest::Approx(-1.0));
    CHECK(report.per_value[2].half_width == doctest::Approx(0.0));

    const auto strict = estimate_drift(traces, TraceField::L, all, 2);
    CHECK(strict.per_value.size() == 1);
    CHECK(strict.omitted == std::vector<std::int64_t>{3, 4});

    const auto pooled = pooled_drift(traces, TraceField::L, [](std::int64_t v) { return v >= 4; });
    CHECK(pooled.samples == 3);
    CHECK(pooled.mean == doctest::Approx(-1.0));
    CHECK(pooled.upper() < 0);

    CHECK_THROWS_AS(estimate_drift({}, TraceField::L, all), UsageError);
    CHECK_THROWS_AS(estimate_drift(traces, TraceField::ell, all), UsageError);
}

TEST_CASE("constant traces have zero drift")
{
    const std::vector<std::vector<TraceSample>> traces{make_trace({{0, 3}, {1, 3}, {2, 3}, {3, 3}})};
    const auto d = pooled_drift(traces, TraceField::d, [](std::int64_t) { return true; });
    CHECK(d.samples == 3);
    CHECK(d.mean == 0.0);
    CHECK(d.half_width == 0.0);
}
