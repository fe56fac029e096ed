// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "diagnostics.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace semo {

/// Noise rate as a function of n: c * (ln n)^a / n^k with a in {0, 1}.
///
/// Text forms: "0.01", "0.25/n", "0.1/n2", "0.1/n^2", "4logn/n2",
/// "logn/n2", "2*logn/n". The logarithm is natural.
class NoiseRule {
public:
    /// Throws RuleParseError with the offending position.
    static NoiseRule parse(std::string_view text);
    static NoiseRule constant(double p);

    /// Throws UsageError if the rate leaves [0, 1] at this n.
    double evaluate(std::size_t n) const;

    const std::string& text() const noexcept { return text_; }
    double coefficient() const noexcept { return coefficient_; }
    bool log_factor() const noexcept { return log_factor_; }
    unsigned power() const noexcept { return power_; }

    friend bool operator==(const NoiseRule&, const NoiseRule&) = default;

private:
    double coefficient_ = 0.0;
    bool log_factor_ = false;
    unsigned power_ = 0;
    std::string text_;
};

class RuleParseError : public UsageError {
public:
    RuleParseError(std::string_view text, std::size_t position, const std::string& expected);
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Iteration budget: an absolute count, or ceil(multiple * n^2 * ln n)
/// floored at kMinBudget (n^2 ln n vanishes at n = 1).
struct BudgetRule {
    static constexpr std::uint64_t kMinBudget = 1000;

    double multiple = 20.0;
    std::optional<std::uint64_t> absolute;

    std::uint64_t evaluate(std::size_t n) const;

    friend bool operator==(const BudgetRule&, const BudgetRule&) = default;
};

struct VariantSpec {
    Variant variant = Variant::Cached;
    std::uint64_t keep_limit = 0;

    /// "cached", "reeval", "keep" (uses default_keep), "keep<K>", "keepinf".
    static VariantSpec parse(std::string_view text, std::uint64_t default_keep);
    std::string label() const;

    friend bool operator==(const VariantSpec&, const VariantSpec&) = default;
};

struct CellParams {
    std::size_t n = 1;
    double p = 0.0;
    std::string p_rule = "0";
    VariantSpec variant;
    std::uint64_t budget = 0;
    std::uint64_t trials = 1;
    std::uint64_t seed = 0;
    TraceOptions trace;
    DominanceMode mode = DominanceMode::OneMinMaxFastPath;
};

/// Seed of trial `trial` within a cell seeded with `cell_seed`.
std::uint64_t trial_seed(std::uint64_t cell_seed, std::uint64_t trial) noexcept;

/// `trials` independent runs to full coverage or budget exhaustion. Output
/// order is trial order and does not depend on `workers`.
std::vector<RunRecord> run_cell(const CellParams& cell, unsigned workers = 1);

struct Quantiles {
    double min = 0, q25 = 0, median = 0, q75 = 0, max = 0, mean = 0;
};

/// Linear-interpolation quantiles (type 7). Throws UsageError on empty input.
Quantiles quantiles(std::vector<double> values);

struct CellSummary {
    std::size_t n = 0;
    double p = 0.0;
    std::string p_rule;
    VariantSpec variant;
    std::uint64_t budget = 0;
    std::uint64_t trials = 0;
    std::uint64_t uncensored = 0;
    double censored_fraction = 0.0;
    /// Over uncensored records only; empty when every trial was censored.
    std::optional<Quantiles> total;
    std::optional<Quantiles> extremes;
    std::optional<Quantiles> total_evaluations;
    double mean_evaluations = 0.0;
};

CellSummary summarize(const CellParams& cell, std::span<const RunRecord> records);

struct SweepGrid {
    std::vector<std::size_t> n_values;
    std::vector<NoiseRule> p_rules;
    std::vector<VariantSpec> variants;
    std::uint64_t trials = 1;
    BudgetRule budget;
    std::uint64_t master_seed = 1;
    TraceOptions trace;
    DominanceMode mode = DominanceMode::OneMinMaxFastPath;
};

/// Cells in variant-major, then rule, then n order; cell i is seeded with
/// Rng::derive(master_seed, i).
std::vector<CellParams> expand(const SweepGrid& grid);

struct CellResult {
    CellParams params;
    std::vector<RunRecord> records;
    CellSummary summary;
};

struct SweepResult {
    SweepGrid grid;
    std::vector<CellResult> cells;
};

SweepResult run_sweep(const SweepGrid& grid, unsigned workers = 1);

// ---------------------------------------------------------------------------
// Scaling fits and regime separation

enum class Regressor {
    /// log y = log c + b log n.
    N,
    /// log y = log c + b log(n^2 ln n); b is 1 for an exact n^2 ln n law and
    /// c is then the prefactor.
    NSquaredLogN,
};

struct ScalingPoint {
    double n = 0;
    double value = 0;
};

struct ScalingFit {
    double exponent = 0;
    double constant = 0;
    /// Residual sum of squares in log space.
    double residual = 0;
    std::size_t points = 0;
};

/// Least squares on logarithms. Throws UsageError with fewer than 3 points,
/// a non-positive value, or (for NSquaredLogN) n < 2.
ScalingFit fit_scaling(std::span<const ScalingPoint> points, Regressor regressor = Regressor::N);

struct SeparationRow {
    std::size_t n = 0;
    std::string p_rule;
    double p = 0;
    std::optional<double> cached_median;
    std::optional<double> reeval_median;
    /// reeval median / cached median, when both exist.
    std::optional<double> median_ratio;
    double cached_censored = 0;
    double reeval_censored = 0;
    /// Reeval censored fraction above threshold while cached's is not.
    bool flagged = false;
};

/// Pairs cached and reeval summaries on equal (n, p rule).
std::vector<SeparationRow> separation_report(std::span<const CellSummary> summaries, double threshold = 0.5);

} // namespace semo
