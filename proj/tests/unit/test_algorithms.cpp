// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "algorithms.hpp"
#include "checks.hpp"
#include "oracles/oracles.hpp"

#include <map>

using namespace semo;
using testing::CachedMember;

namespace {

// Looser than the acceptance tolerances: fewer samples here.
constexpr std::uint64_t kSamples = 40000;
constexpr double kTolerance = 0.03;

} // namespace

TEST_CASE("cached population validation")
{
    CHECK_THROWS_AS(CachedPopulation(3, {}), UsageError);
    CHECK_THROWS_AS(testing::make_cached({{"010", 1}, {"011", 1}}), UsageError);
    CHECK_THROWS_AS(CachedPopulation(3, {{Bitstring::parse("010"), ObjectiveVector{1, 1}}}), UsageError);
    const auto pop = testing::make_cached({{"010", 0}, {"011", 3}});
    CHECK(pop.size() == 2);
    CHECK(pop.find_stored(3) == 1);
    CHECK(pop.find_stored(2) == npos);
}

TEST_CASE("cached init evaluates once and each step evaluates once")
{
    Rng rng(3);
    NoisyEvaluator ev{NoiseSpec(0.1)};
    auto pop = cached_init(20, ev, rng);
    CHECK(pop.size() == 1);
    CHECK(ev.evaluations() == 1);
    for (int t = 0; t < 100; ++t) {
        const auto log = cached_step(pop, ev, rng);
        // No OneMinMax value strictly dominates another.
        CHECK(log.accepted);
        CHECK(log.removed <= 1);
    }
    CHECK(pop.iteration() == 100);
    CHECK(ev.evaluations() == 101);
}

TEST_CASE("cached offspring replaces the member with an equal stored value in place")
{
    // Noiseless: parent 00 -> offspring has one 1, which equals the stored value of member 1.
    auto pop = testing::make_cached({{"00", 0}, {"10", 1}, {"11", 2}});
    Rng rng(1);
    NoisyEvaluator ev{NoiseSpec(0.0)};
    for (int attempt = 0; attempt < 50; ++attempt) {
        auto copy = pop;
        const auto log = cached_step(copy, ev, rng);
        REQUIRE(copy.size() == 3);
        CHECK(log.removed == 1);
        const auto slot = copy.find_stored(log.offspring_value);
        CHECK(slot == static_cast<std::size_t>(log.offspring_value));
        CHECK(copy.members()[slot].genome.count_ones() == static_cast<std::size_t>(log.offspring_ones));
    }
}

TEST_CASE("cached one-step distribution matches exhaustive enumeration")
{
    const std::vector<CachedMember> start{{"010", 0}, {"011", 3}};
    const auto exact = testing::cached_step_distribution(start, 0.5);
    for (const auto mode : {DominanceMode::OneMinMaxFastPath, DominanceMode::General}) {
        const auto seen = testing::sample_cached(testing::make_cached(start), 0.5, kSamples, 21, mode);
        CHECK(testing::tv_distance(exact, seen) <= kTolerance);
    }
}

TEST_CASE("random_order is a uniform permutation")
{
    Rng rng(4);
    std::map<std::vector<std::size_t>, std::uint64_t> counts;
    for (int s = 0; s < 60000; ++s) {
        ++counts[random_order(3, rng)];
    }
    REQUIRE(counts.size() == 6);
    std::vector<std::uint64_t> observed;
    for (const auto& [perm, c] : counts) {
        observed.push_back(c);
    }
    CHECK(oracle::chi_square_gof(observed, std::vector<double>(6, 1.0 / 6), 0.001).passed);
    CHECK(random_order(1, rng) == std::vector<std::size_t>{0});
}

TEST_CASE("elim with injected values matches the brute-force predicate")
{
    Rng rng(8);
    for (int c = 0; c < 500; ++c) {
        const auto size = 1 + rng.uniform_below(6);
        const auto dim = 2 + rng.uniform_below(2);
        oracle::Values raw(size);
        std::vector<ObjectiveVector> values;
        for (auto& v : raw) {
            for (std::uint64_t d = 0; d < dim; ++d) {
                v.push_back(static_cast<std::int64_t>(rng.uniform_below(3)));
            }
            values.emplace_back(v);
        }
        std::size_t calls = 0;
        auto result = elim(
            size,
            [&](std::size_t i) {
                ++calls;
                return values[i];
            },
            rng);
        CHECK(calls == size);
        auto kept = result.kept;
        std::sort(kept.begin(), kept.end());
        const auto admissible = oracle::minimal_dominant_subsets(raw);
        CHECK(std::find(admissible.begin(), admissible.end(), kept) != admissible.end());
    }
    CHECK_THROWS_AS(elim(
                        0, [](std::size_t) { return ObjectiveVector{}; }, rng),
                    UsageError);
}

TEST_CASE("elim keeps the later of two equal values")
{
    Rng rng(2);
    const std::vector<ObjectiveVector> values{{1, 1}, {1, 1}};
    const auto result = elim(
        2, [&](std::size_t i) { return values[i]; }, rng);
    REQUIRE(result.kept.size() == 1);
    CHECK(result.kept.front() == result.visit_order.back());
}

TEST_CASE("OneMinMax elim agrees with generic elim draw for draw")
{
    Rng gen(12);
    for (int c = 0; c < 300; ++c) {
        const auto n = 2 + gen.uniform_below(6);
        const auto count = 1 + gen.uniform_below(8);
        std::vector<Bitstring> elements;
        for (std::uint64_t i = 0; i < count; ++i) {
            elements.push_back(Bitstring::random(n, gen));
        }
        const auto seed = gen.next_u64();
        Rng a(seed);
        Rng b(seed);
        NoisyEvaluator ea{NoiseSpec(0.3)};
        NoisyEvaluator eb{NoiseSpec(0.3)};
        const auto fast = elim_one_min_max(elements, ea, a);
        const auto slow = elim(
            count, [&](std::size_t i) { return eb.evaluate(elements[i], b); }, b);
        CHECK(fast.kept == slow.kept);
        REQUIRE(fast.first_values.size() == count);
        for (std::uint64_t i = 0; i < count; ++i) {
            CHECK(fast.first_values[i] == slow.values[i][0]);
        }
        CHECK(a.next_u64() == b.next_u64());
    }
}

TEST_CASE("reeval one-step distribution matches exhaustive enumeration")
{
    const std::vector<std::string> start{"010", "111"};
    const auto exact = testing::reeval_step_distribution(start, 0.3);
    for (const auto mode : {DominanceMode::OneMinMaxFastPath, DominanceMode::General}) {
        const auto seen = testing::sample_reeval(testing::make_reeval(start), 0.3, kSamples, 5, false, mode);
        CHECK(testing::tv_distance(exact, seen) <= kTolerance);
    }
}

TEST_CASE("unbounded extreme keeping matches its enumeration")
{
    const std::vector<std::string> start{"100", "110"};
    const auto exact = testing::reeval_step_distribution(start, 0.3, true);
    const auto seen = testing::sample_reeval(testing::make_reeval(start), 0.3, kSamples, 6, true);
    CHECK(testing::tv_distance(exact, seen) <= kTolerance);
}

TEST_CASE("reeval step evaluates every member plus the offspring")
{
    Rng rng(5);
    NoisyEvaluator ev{NoiseSpec(0.2)};
    auto pop = reeval_init(12, rng);
    CHECK(ev.evaluations() == 0);
    std::uint64_t expected = 0;
    for (int t = 0; t < 200; ++t) {
        const auto before = pop.size();
        expected += before + 1;
        const auto log = reeval_step(pop, ev, rng);
        CHECK(log.evaluated == before + 1);
        CHECK(log.kept_values.size() == pop.size());
        CHECK(ev.evaluations() == expected);
        CHECK(pop.size() <= 13);
    }
}

TEST_CASE("extreme keeping with K = 0 follows the plain reeval trajectory")
{
    AlgorithmConfig plain;
    plain.n = 14;
    plain.noise = NoiseSpec(0.1);
    plain.variant = Variant::Reeval;
    auto keep = plain;
    keep.variant = Variant::ExtremeKeeping;
    keep.keep_limit = 0;
    SemoProcess a(plain, 99);
    SemoProcess b(keep, 99);
    for (int t = 0; t < 2000; ++t) {
        a.step();
        b.step();
        const auto ma = a.reeval().members();
        const auto mb = b.reeval().members();
        REQUIRE(std::equal(ma.begin(), ma.end(), mb.begin(), mb.end()));
    }
}

TEST_CASE("extreme keeping puts extremes back only during the first K iterations")
{
    Rng rng(6);
    NoisyEvaluator ev{NoiseSpec(0.0)};
    auto pop = testing::make_reeval({"0110"});
    const auto first = extreme_keeping_step(pop, ev, 1, rng);
    CHECK(first.extremes_appended == 2);
    // Offspring of 0110 has 1 or 3 ones, so both survive elim.
    CHECK(pop.size() == 4);
    CHECK(pop.members()[pop.size() - 2].count_ones() == 0);
    CHECK(pop.members().back().count_ones() == 4);

    auto later = testing::make_reeval({"0110"});
    for (int t = 0; t < 3; ++t) {
        reeval_step(later, ev, rng);
    }
    // iteration() is 3 now, so K = 3 no longer applies.
    CHECK(extreme_keeping_step(later, ev, 3, rng).extremes_appended == 0);
}

TEST_CASE("fast and general paths give identical trajectories")
{
    for (const auto variant : {Variant::Cached, Variant::Reeval, Variant::ExtremeKeeping}) {
        AlgorithmConfig fast;
        fast.n = 10;
        fast.noise = NoiseSpec(0.3);
        fast.variant = variant;
        fast.keep_limit = 100;
        auto general = fast;
        general.mode = DominanceMode::General;
        SemoProcess a(fast, 1234);
        SemoProcess b(general, 1234);
        for (int t = 0; t < 1000; ++t) {
            a.step();
            b.step();
        }
        CHECK(a.evaluations() == b.evaluations());
        REQUIRE(a.size() == b.size());
        if (a.is_cached()) {
            for (std::size_t i = 0; i < a.size(); ++i) {
                CHECK(a.cached().members()[i].genome == b.cached().members()[i].genome);
                CHECK(a.cached().members()[i].stored_value == b.cached().members()[i].stored_value);
            }
        } else {
            const auto ma = a.reeval().members();
            const auto mb = b.reeval().members();
            CHECK(std::equal(ma.begin(), ma.end(), mb.begin(), mb.end()));
        }
    }
}

TEST_CASE("process accessors and configuration checks")
{
    AlgorithmConfig config;
    config.n = 8;
    SemoProcess cached(config, 1);
    CHECK(cached.is_cached());
    CHECK(cached.evaluations() == 1);
    CHECK_THROWS_AS(cached.reeval(), UsageError);
    CHECK(cached.seed() == 1);

    config.variant = Variant::Reeval;
    SemoProcess reeval(config, 1);
    CHECK_FALSE(reeval.is_cached());
    CHECK(reeval.evaluations() == 0);
    CHECK_THROWS_AS(reeval.cached(), UsageError);
    CHECK_THROWS_AS(SemoProcess(config, 1, testing::make_cached({{"0000", 0}})), UsageError);

    config.n = 0;
    CHECK_THROWS_AS(SemoProcess(config, 1), UsageError);

    CHECK(to_string(Variant::Cached) == "cached");
    CHECK(to_string(Variant::Reeval) == "reeval");
    CHECK(to_string(Variant::ExtremeKeeping) == "keep");
}
