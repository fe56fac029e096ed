// SPDX-License-Identifier: Apache-2.0
#include "validate.hpp"

#include "diagnostics.hpp"
#include "oracles/oracles.hpp"

#include <algorithm>
#include <sstream>

namespace semo {

namespace {

constexpr std::size_t kLemmaN = 50;

ValidationCheck finish(std::string name, std::uint64_t violations, const std::vector<std::string>& first_messages,
                       const std::string& summary)
{
    ValidationCheck c;
    c.name = std::move(name);
    c.violations = violations;
    c.passed = violations == 0;
    c.detail = summary;
    if (!first_messages.empty()) {
        c.detail += "; first: " + first_messages.front();
    }
    return c;
}

struct Tally {
    std::uint64_t violations = 0;
    std::vector<std::string> messages;

    void add(const std::vector<std::string>& found)
    {
        violations += found.size();
        if (messages.size() < 5) {
            messages.insert(messages.end(), found.begin(), found.end());
        }
    }
    void add(const std::string& message) { add(std::vector<std::string>{message}); }
};

ValidationCheck cached_lemmas(std::uint64_t target_steps, std::uint64_t seed)
{
    const NoiseSpec noise(0.5 / static_cast<double>(kLemmaN));
    Tally tally;
    std::uint64_t steps = 0;
    std::uint64_t runs = 0;
    while (steps < target_steps) {
        Rng rng(Rng::derive(seed, runs++));
        NoisyEvaluator evaluator(noise);
        auto pop = cached_init(kLemmaN, evaluator, rng);
        tally.add(check_cached_state(pop));
        while (steps < target_steps && !pareto_covered(pop)) {
            const auto before = stored_values(pop);
            const auto evals = evaluator.evaluations();
            cached_step(pop, evaluator, rng);
            ++steps;
            tally.add(check_cached_state(pop));
            tally.add(check_cached_transition(before, pop));
            if (evaluator.evaluations() != evals + 1) {
                tally.add("cached step used " + std::to_string(evaluator.evaluations() - evals) + " evaluations");
            }
        }
    }
    return finish("cached lemma invariants", tally.violations, tally.messages,
                  std::to_string(steps) + " steps over " + std::to_string(runs) + " runs at n=50, p=0.5/n");
}

ValidationCheck reeval_invariants(Variant variant, std::uint64_t target_steps, std::uint64_t seed)
{
    const NoiseSpec noise(0.5 / static_cast<double>(kLemmaN));
    Tally tally;
    std::uint64_t steps = 0;
    std::uint64_t runs = 0;
    while (steps < target_steps) {
        Rng rng(Rng::derive(seed, runs++));
        NoisyEvaluator evaluator(noise);
        auto pop = reeval_init(kLemmaN, rng);
        while (steps < target_steps && !pareto_covered(pop)) {
            const auto size = pop.size();
            const auto evals = evaluator.evaluations();
            const auto log = variant == Variant::Reeval ? reeval_step(pop, evaluator, rng)
                                                        : extreme_keeping_step(pop, evaluator, kUnboundedKeep, rng);
            ++steps;
            tally.add(check_reeval_step(pop, log));
            if (evaluator.evaluations() != evals + size + 1) {
                tally.add("reevaluating step used " + std::to_string(evaluator.evaluations() - evals) +
                          " evaluations for " + std::to_string(size) + " members");
            }
            if (variant == Variant::ExtremeKeeping && !extremes_found(pop, ExtremesMode::TrueValues)) {
                tally.add("extreme values missing after an unbounded keeping step");
            }
        }
    }
    const std::string name = variant == Variant::Reeval ? "reeval elim invariants" : "extreme-keeping invariants";
    return finish(name, tally.violations, tally.messages,
                  std::to_string(steps) + " steps over " + std::to_string(runs) + " runs at n=50, p=0.5/n");
}

bool includes(const std::vector<std::int64_t>& superset, const std::vector<std::int64_t>& subset)
{
    return std::includes(superset.begin(), superset.end(), subset.begin(), subset.end());
}

ValidationCheck noiseless_monotonicity(std::uint64_t target_steps, std::uint64_t seed)
{
    Tally tally;
    std::uint64_t steps = 0;
    for (const auto variant : {Variant::Cached, Variant::Reeval}) {
        AlgorithmConfig config;
        config.n = 30;
        config.variant = variant;
        std::uint64_t run = 0;
        std::uint64_t local = 0;
        while (local < target_steps / 4) {
            SemoProcess process(config, Rng::derive(seed + 7, run++));
            auto values = process.is_cached() ? true_values(process.cached()) : true_values(process.reeval());
            while (local < target_steps / 4 && !pareto_covered(process)) {
                process.step();
                ++local;
                auto next = process.is_cached() ? true_values(process.cached()) : true_values(process.reeval());
                if (!includes(next, values)) {
                    tally.add(std::string(to_string(variant)) + " lost a true value without noise at t=" +
                              std::to_string(process.iteration()));
                }
                values = std::move(next);
            }
        }
        steps += local;
    }
    return finish("noiseless value monotonicity", tally.violations, tally.messages,
                  std::to_string(steps) + " steps at n=30, p=0");
}

ValidationCheck path_agreement(std::uint64_t seed)
{
    Tally tally;
    constexpr std::uint64_t kSteps = 3000;
    for (const auto variant : {Variant::Cached, Variant::Reeval, Variant::ExtremeKeeping}) {
        for (std::uint64_t run = 0; run < 3; ++run) {
            AlgorithmConfig config;
            config.n = 16;
            config.noise = NoiseSpec(0.2);
            config.variant = variant;
            config.keep_limit = 500;
            auto general_config = config;
            general_config.mode = DominanceMode::General;
            const auto s = Rng::derive(seed + 11, run);
            SemoProcess fast(config, s);
            SemoProcess general(general_config, s);
            for (std::uint64_t t = 0; t < kSteps; ++t) {
                fast.step();
                general.step();
                bool same = fast.evaluations() == general.evaluations() && fast.size() == general.size();
                if (same && fast.is_cached()) {
                    const auto a = fast.cached().members();
                    const auto b = general.cached().members();
                    same = std::equal(a.begin(), a.end(), b.begin(), b.end(), [](const auto& x, const auto& y) {
                        return x.genome == y.genome && x.stored_value == y.stored_value;
                    });
                } else if (same) {
                    const auto a = fast.reeval().members();
                    const auto b = general.reeval().members();
                    same = std::equal(a.begin(), a.end(), b.begin(), b.end());
                }
                if (!same) {
                    tally.add(std::string(to_string(variant)) + " fast and general paths diverge at t=" +
                              std::to_string(t + 1));
                    break;
                }
            }
        }
    }
    return finish("fast/general path agreement", tally.violations, tally.messages,
                  "3 variants x 3 runs x 3000 steps at n=16, p=0.2");
}

ValidationCheck elim_oracle(std::uint64_t cases, std::uint64_t seed)
{
    Tally tally;
    Rng rng(Rng::derive(seed + 13, 0));
    for (std::uint64_t c = 0; c < cases; ++c) {
        const auto size = 1 + static_cast<std::size_t>(rng.uniform_below(6));
        const auto dim = rng.bernoulli(0.75) ? 2U : 3U;
        oracle::Values raw(size);
        std::vector<ObjectiveVector> values;
        for (auto& v : raw) {
            for (unsigned d = 0; d < dim; ++d) {
                v.push_back(static_cast<std::int64_t>(rng.uniform_below(4)));
            }
            values.emplace_back(v);
        }
        auto result = elim(
            size, [&](std::size_t i) { return values[i]; }, rng);
        auto kept = result.kept;
        std::sort(kept.begin(), kept.end());
        const auto admissible = oracle::minimal_dominant_subsets(raw);
        if (std::find(admissible.begin(), admissible.end(), kept) == admissible.end()) {
            std::ostringstream os;
            os << "case " << c << ": elim kept {";
            for (const auto i : kept) {
                os << ' ' << values[i].to_string();
            }
            os << " }";
            tally.add(os.str());
        }
    }
    return finish("elim brute-force oracle", tally.violations, tally.messages,
                  std::to_string(cases) + " random multisets of <= 6 elements");
}

ValidationCheck chi_square_check(std::string name, const std::vector<std::uint64_t>& observed,
                                 const std::vector<double>& expected)
{
    const auto r = oracle::chi_square_gof(observed, expected, 0.01);
    std::ostringstream os;
    os << "chi2=" << r.statistic << " critical=" << r.critical << " df=" << r.df << " p=" << r.p_value;
    ValidationCheck c;
    c.name = std::move(name);
    c.passed = r.passed;
    c.violations = r.passed ? 0 : 1;
    c.detail = os.str();
    return c;
}

ValidationCheck noise_distribution(std::uint64_t seed)
{
    constexpr std::uint64_t kSamples = 100000;
    Rng rng(Rng::derive(seed + 17, 0));
    const auto x = Bitstring::parse("0000");
    const NoiseSpec noise(0.5);
    std::vector<std::uint64_t> counts(5, 0);
    for (std::uint64_t s = 0; s < kSamples; ++s) {
        const auto y = noisy_variant(x, noise, rng);
        if (y == x) {
            ++counts[0];
        } else {
            for (std::size_t i = 0; i < 4; ++i) {
                if (y.test(i)) {
                    ++counts[1 + i];
                }
            }
        }
    }
    return chi_square_check("noise model distribution (n=4, p=0.5)", counts, {0.5, 0.125, 0.125, 0.125, 0.125});
}

ValidationCheck mutation_distribution(std::uint64_t seed)
{
    constexpr std::uint64_t kSamples = 100000;
    Rng rng(Rng::derive(seed + 19, 0));
    const auto x = Bitstring::parse("01101");
    std::vector<std::uint64_t> counts(5, 0);
    for (std::uint64_t s = 0; s < kSamples; ++s) {
        std::size_t pos = 0;
        const auto y = mutate_one_bit(x, rng, pos);
        std::size_t differing = 0;
        for (std::size_t i = 0; i < 5; ++i) {
            if (y.test(i) != x.test(i)) {
                ++differing;
                ++counts[i];
            }
        }
        if (differing != 1) {
            return {"one-bit mutation distribution", false, 1, "mutation changed " + std::to_string(differing) + " bits"};
        }
    }
    return chi_square_check("one-bit mutation distribution", counts, std::vector<double>(5, 0.2));
}

ValidationCheck parent_selection(std::uint64_t seed)
{
    constexpr std::uint64_t kSamples = 100000;
    Rng rng(Rng::derive(seed + 23, 0));
    constexpr std::size_t n = 6;
    std::vector<CachedIndividual> members;
    for (std::int64_t k = 0; k < 5; ++k) {
        std::string s(n, '0');
        std::fill(s.begin(), s.begin() + k, '1');
        members.push_back({Bitstring::parse(s), one_min_max_value(k, n)});
    }
    const CachedPopulation base(n, members);
    NoisyEvaluator evaluator(NoiseSpec(0.3));
    std::vector<std::uint64_t> counts(members.size(), 0);
    for (std::uint64_t s = 0; s < kSamples; ++s) {
        auto pop = base;
        ++counts[cached_step(pop, evaluator, rng).parent_index];
    }
    return chi_square_check("uniform parent selection", counts, std::vector<double>(members.size(), 0.2));
}

} // namespace

std::vector<ValidationCheck> run_validation(const ValidationOptions& options)
{
    const std::uint64_t steps = options.quick ? 10000 : 100000;
    std::vector<ValidationCheck> checks;
    checks.push_back(cached_lemmas(steps, options.seed));
    checks.push_back(reeval_invariants(Variant::Reeval, steps, options.seed));
    checks.push_back(reeval_invariants(Variant::ExtremeKeeping, steps, options.seed));
    checks.push_back(noiseless_monotonicity(steps, options.seed));
    checks.push_back(path_agreement(options.seed));
    checks.push_back(elim_oracle(1000, options.seed));
    checks.push_back(noise_distribution(options.seed));
    checks.push_back(mutation_distribution(options.seed));
    checks.push_back(parent_selection(options.seed));
    return checks;
}

} // namespace semo
