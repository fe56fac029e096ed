// SPDX-License-Identifier: Apache-2.0
#include "experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

namespace semo {

// ---------------------------------------------------------------------------
// NoiseRule

RuleParseError::RuleParseError(std::string_view text, std::size_t position, const std::string& expected)
    : UsageError("invalid noise rule '" + std::string(text) + "' at position " + std::to_string(position) + ": " +
                 expected),
      position_(position)
{
}

NoiseRule NoiseRule::parse(std::string_view text)
{
    NoiseRule rule;
    rule.text_ = std::string(text);
    std::size_t pos = 0;
    auto peek = [&](std::string_view token) { return text.substr(pos, token.size()) == token; };

    bool have_number = false;
    rule.coefficient_ = 1.0;
    if (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.')) {
        double value = 0;
        const auto* begin = text.data() + pos;
        const auto [ptr, ec] = std::from_chars(begin, text.data() + text.size(), value);
        if (ec != std::errc{}) {
            throw RuleParseError(text, pos, "malformed number");
        }
        rule.coefficient_ = value;
        pos += static_cast<std::size_t>(ptr - begin);
        have_number = true;
        if (peek("*")) {
            ++pos;
            if (!peek("logn")) {
                throw RuleParseError(text, pos, "expected 'logn' after '*'");
            }
        }
    }
    if (peek("logn")) {
        rule.log_factor_ = true;
        pos += 4;
    } else if (!have_number) {
        throw RuleParseError(text, pos, "expected a number or 'logn'");
    }
    if (peek("/")) {
        ++pos;
        if (!peek("n")) {
            throw RuleParseError(text, pos, "expected 'n' after '/'");
        }
        ++pos;
        rule.power_ = 1;
        const bool caret = peek("^");
        if (caret) {
            ++pos;
        }
        if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            unsigned power = 0;
            const auto* begin = text.data() + pos;
            const auto [ptr, ec] = std::from_chars(begin, text.data() + text.size(), power);
            if (ec != std::errc{}) {
                throw RuleParseError(text, pos, "malformed exponent");
            }
            rule.power_ = power;
            pos += static_cast<std::size_t>(ptr - begin);
        } else if (caret) {
            throw RuleParseError(text, pos, "expected an exponent after '^'");
        }
    }
    if (pos != text.size()) {
        throw RuleParseError(text, pos, "unexpected '" + std::string(1, text[pos]) + "'");
    }
    return rule;
}

NoiseRule NoiseRule::constant(double p)
{
    NoiseRule rule;
    rule.coefficient_ = p;
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, p);
    rule.text_ = std::string(buf, ptr);
    return rule;
}

double NoiseRule::evaluate(std::size_t n) const
{
    if (n == 0) {
        throw UsageError("noise rule needs n >= 1");
    }
    const auto nd = static_cast<double>(n);
    double p = coefficient_;
    if (log_factor_) {
        p *= std::log(nd);
    }
    double divisor = 1.0;
    for (unsigned k = 0; k < power_; ++k) {
        divisor *= nd;
    }
    p /= divisor;
    if (!(p >= 0.0 && p <= 1.0)) {
        throw UsageError("noise rule '" + text_ + "' gives p = " + std::to_string(p) + " outside [0, 1] at n = " +
                         std::to_string(n));
    }
    return p;
}

std::uint64_t BudgetRule::evaluate(std::size_t n) const
{
    if (absolute) {
        return *absolute;
    }
    const auto nd = static_cast<double>(n);
    const auto raw = std::ceil(multiple * nd * nd * std::log(nd));
    return std::max(kMinBudget, static_cast<std::uint64_t>(std::max(0.0, raw)));
}

VariantSpec VariantSpec::parse(std::string_view text, std::uint64_t default_keep)
{
    if (text == "cached") {
        return {Variant::Cached, 0};
    }
    if (text == "reeval") {
        return {Variant::Reeval, 0};
    }
    if (text.starts_with("keep")) {
        auto rest = text.substr(4);
        if (rest.empty()) {
            return {Variant::ExtremeKeeping, default_keep};
        }
        if (rest == "inf") {
            return {Variant::ExtremeKeeping, kUnboundedKeep};
        }
        std::uint64_t k = 0;
        const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), k);
        if (ec == std::errc{} && ptr == rest.data() + rest.size()) {
            return {Variant::ExtremeKeeping, k};
        }
    }
    throw UsageError("unknown variant '" + std::string(text) + "' (expected cached, reeval, keep, keep<K>, keepinf)");
}

std::string VariantSpec::label() const
{
    if (variant != Variant::ExtremeKeeping) {
        return std::string(to_string(variant));
    }
    return keep_limit == kUnboundedKeep ? "keepinf" : "keep" + std::to_string(keep_limit);
}

// ---------------------------------------------------------------------------
// Cells

std::uint64_t trial_seed(std::uint64_t cell_seed, std::uint64_t trial) noexcept
{
    return Rng::derive(cell_seed, trial);
}

std::vector<RunRecord> run_cell(const CellParams& cell, unsigned workers)
{
    AlgorithmConfig config;
    config.n = cell.n;
    config.noise = NoiseSpec(cell.p);
    config.variant = cell.variant.variant;
    config.keep_limit = cell.variant.keep_limit;
    config.mode = cell.mode;
    if (config.n == 0) {
        throw UsageError("problem size n must be at least 1");
    }

    std::vector<RunRecord> records(cell.trials);
    auto run_one = [&](std::uint64_t trial) {
        SemoProcess process(config, trial_seed(cell.seed, trial));
        records[trial] = run_until_covered(process, cell.budget, cell.trace);
    };

    workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::uint64_t>(1, cell.trials))));
    if (workers == 1) {
        for (std::uint64_t t = 0; t < cell.trials; ++t) {
            run_one(t);
        }
        return records;
    }

    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (auto t = next.fetch_add(1); t < cell.trials; t = next.fetch_add(1)) {
                    try {
                        run_one(t);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) {
                            failure = std::current_exception();
                        }
                    }
                }
            });
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return records;
}

Quantiles quantiles(std::vector<double> values)
{
    if (values.empty()) {
        throw UsageError("quantiles of an empty sample");
    }
    std::sort(values.begin(), values.end());
    auto at = [&](double q) {
        const auto h = q * static_cast<double>(values.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const auto hi = std::min(lo + 1, values.size() - 1);
        return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
    };
    Quantiles q;
    q.min = values.front();
    q.q25 = at(0.25);
    q.median = at(0.5);
    q.q75 = at(0.75);
    q.max = values.back();
    double sum = 0;
    for (const auto v : values) {
        sum += v;
    }
    q.mean = sum / static_cast<double>(values.size());
    return q;
}

CellSummary summarize(const CellParams& cell, std::span<const RunRecord> records)
{
    CellSummary s;
    s.n = cell.n;
    s.p = cell.p;
    s.p_rule = cell.p_rule;
    s.variant = cell.variant;
    s.budget = cell.budget;
    s.trials = records.size();

    std::vector<double> totals;
    std::vector<double> extremes;
    std::vector<double> evals;
    double eval_sum = 0;
    for (const auto& r : records) {
        eval_sum += static_cast<double>(r.evaluations);
        if (!r.total.censored) {
            totals.push_back(static_cast<double>(r.total.value));
            evals.push_back(static_cast<double>(r.evaluations));
        }
        if (!r.extremes.censored) {
            extremes.push_back(static_cast<double>(r.extremes.value));
        }
    }
    s.uncensored = totals.size();
    if (!records.empty()) {
        s.censored_fraction = static_cast<double>(records.size() - totals.size()) / static_cast<double>(records.size());
        s.mean_evaluations = eval_sum / static_cast<double>(records.size());
    }
    if (!totals.empty()) {
        s.total = quantiles(totals);
        s.total_evaluations = quantiles(evals);
    }
    if (!extremes.empty()) {
        s.extremes = quantiles(extremes);
    }
    return s;
}

std::vector<CellParams> expand(const SweepGrid& grid)
{
    if (grid.trials == 0) {
        throw UsageError("trials per cell must be at least 1");
    }
    if (grid.n_values.empty() || grid.p_rules.empty() || grid.variants.empty()) {
        throw UsageError("sweep grid needs at least one n, one noise rule and one variant");
    }
    std::vector<CellParams> cells;
    for (const auto& variant : grid.variants) {
        for (const auto& rule : grid.p_rules) {
            for (const auto n : grid.n_values) {
                if (n == 0) {
                    throw UsageError("problem size n must be at least 1");
                }
                CellParams c;
                c.n = n;
                c.p = rule.evaluate(n);
                c.p_rule = rule.text();
                c.variant = variant;
                c.budget = grid.budget.evaluate(n);
                c.trials = grid.trials;
                c.seed = Rng::derive(grid.master_seed, cells.size());
                c.trace = grid.trace;
                c.mode = grid.mode;
                cells.push_back(std::move(c));
            }
        }
    }
    return cells;
}

SweepResult run_sweep(const SweepGrid& grid, unsigned workers)
{
    SweepResult result;
    result.grid = grid;
    for (auto& params : expand(grid)) {
        CellResult cell;
        cell.records = run_cell(params, workers);
        cell.summary = summarize(params, cell.records);
        cell.params = std::move(params);
        result.cells.push_back(std::move(cell));
    }
    return result;
}

// ---------------------------------------------------------------------------

ScalingFit fit_scaling(std::span<const ScalingPoint> points, Regressor regressor)
{
    if (points.size() < 3) {
        throw UsageError("scaling fit needs at least 3 points");
    }
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& pt : points) {
        if (!(pt.value > 0)) {
            throw UsageError("scaling fit needs positive statistics");
        }
        if (regressor == Regressor::NSquaredLogN && !(pt.n >= 2)) {
            throw UsageError("n^2 ln n regressor needs n >= 2");
        }
        if (!(pt.n > 0)) {
            throw UsageError("scaling fit needs positive n");
        }
        const auto r = regressor == Regressor::N ? pt.n : pt.n * pt.n * std::log(pt.n);
        xs.push_back(std::log(r));
        ys.push_back(std::log(pt.value));
    }
    const auto count = static_cast<double>(xs.size());
    double mx = 0;
    double my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= count;
    my /= count;
    double sxx = 0;
    double sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0) {
        throw UsageError("scaling fit needs at least two distinct n");
    }
    ScalingFit fit;
    fit.exponent = sxy / sxx;
    const auto intercept = my - fit.exponent * mx;
    fit.constant = std::exp(intercept);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto e = ys[i] - intercept - fit.exponent * xs[i];
        fit.residual += e * e;
    }
    fit.points = points.size();
    return fit;
}

std::vector<SeparationRow> separation_report(std::span<const CellSummary> summaries, double threshold)
{
    using Key = std::pair<std::size_t, std::string>;
    std::map<Key, const CellSummary*> cached;
    std::map<Key, const CellSummary*> reeval;
    for (const auto& s : summaries) {
        if (s.variant.variant == Variant::Cached) {
            cached[{s.n, s.p_rule}] = &s;
        } else if (s.variant.variant == Variant::Reeval) {
            reeval[{s.n, s.p_rule}] = &s;
        }
    }
    std::vector<SeparationRow> rows;
    for (const auto& [key, c] : cached) {
        const auto it = reeval.find(key);
        if (it == reeval.end()) {
            continue;
        }
        const auto* r = it->second;
        SeparationRow row;
        row.n = key.first;
        row.p_rule = key.second;
        row.p = c->p;
        if (c->total) {
            row.cached_median = c->total->median;
        }
        if (r->total) {
            row.reeval_median = r->total->median;
        }
        if (row.cached_median && row.reeval_median && *row.cached_median > 0) {
            row.median_ratio = *row.reeval_median / *row.cached_median;
        } else if (row.cached_median && row.reeval_median) {
            row.median_ratio = *row.reeval_median == *row.cached_median ? 1.0 : INFINITY;
        }
        row.cached_censored = c->censored_fraction;
        row.reeval_censored = r->censored_fraction;
        row.flagged = row.reeval_censored > threshold && row.cached_censored <= threshold;
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace semo
