// SPDX-License-Identifier: Apache-2.0
#include "semo/semo.h"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <string>

namespace {

constexpr const char* kLogNote =
    "All logarithms (\"logn\" in noise rules, n^2 ln n budgets) are natural logarithms.\n"
    "Noise rules: <c>, <c>/n, <c>/n2, <c>logn/n2, e.g. 0.25/n or 4logn/n2.\n"
    "Exit codes: 0 ok, 1 I/O failure, 2 usage error, 3 validation failure, 4 internal error.";

struct Deleter {
    void operator()(semo_config* p) const { semo_config_destroy(p); }
    void operator()(semo_result* p) const { semo_result_destroy(p); }
    void operator()(semo_fit* p) const { semo_fit_destroy(p); }
    void operator()(semo_validation* p) const { semo_validation_destroy(p); }
};

template <class T>
using Handle = std::unique_ptr<T, Deleter>;

// Carries a C API status out of a subcommand.
struct Failure {
    semo_status status;
};

void check(semo_status status)
{
    if (status != SEMO_OK) {
        std::cerr << "error: " << semo_last_error() << '\n';
        throw Failure{status};
    }
}

// Flag values as given on the command line, keyed by setting name.
using Overrides = std::map<std::string, std::string>;

void add_grid_flags(CLI::App* cmd, Overrides& o)
{
    cmd->add_option("--n", o["n"], "Problem size(s), comma-separated");
    cmd->add_option("--p", o["p"], "Noise rate(s): number or rule, comma-separated");
    cmd->add_option("--variant", o["variant"], "cached | reeval | keep<K> | keepinf, comma-separated");
    cmd->add_option("--K", o["K"], "Keep limit for a bare 'keep' variant (number or inf)");
    cmd->add_option("--trials", o["trials"], "Trials per cell");
    cmd->add_option("--budget-multiple", o["budget-multiple"], "Budget as a multiple of n^2 ln n (floor 1000)");
    cmd->add_option("--budget", o["budget"], "Absolute iteration budget, overrides --budget-multiple");
    cmd->add_option("--seed", o["seed"], "Master seed");
    cmd->add_option("--trace", o["trace"], "off | full | stride:S");
    cmd->add_option("--mode", o["mode"], "fast | general dominance path");
    cmd->add_option("--workers", o["workers"], "Worker threads");
    cmd->add_option("--out", o["out"], "Records output path");
    cmd->add_option("--format", o["format"], "csv | json records format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--trace-out", o["trace-out"], "Trace CSV output path");
}

Handle<semo_config> make_config(const std::string& config_file, const Overrides& overrides)
{
    semo_config* raw = nullptr;
    check(semo_config_create(&raw));
    Handle<semo_config> config(raw);
    if (!config_file.empty()) {
        check(semo_config_load_file(config.get(), config_file.c_str()));
    }
    for (const auto& [key, value] : overrides) {
        if (!value.empty()) {
            check(semo_config_set(config.get(), key.c_str(), value.c_str()));
        }
    }
    return config;
}

std::string setting(const semo_config* config, const char* key, const std::string& fallback = "")
{
    const char* v = semo_config_get(config, key);
    return v ? std::string(v) : fallback;
}

semo_format output_format(const semo_config* config)
{
    const auto f = setting(config, "format", "csv");
    if (f == "json") {
        return SEMO_FORMAT_JSON;
    }
    if (f != "csv") {
        std::cerr << "error: unknown format '" << f << "' (expected csv or json)\n";
        throw Failure{SEMO_ERROR_USAGE};
    }
    return SEMO_FORMAT_CSV;
}

void print_cell_line(const semo_cell_summary& s)
{
    std::printf("%-8s n=%-5u p_rule=%-10s p=%-12.6g trials=%-5llu censored=%.3f", s.variant, s.n, s.p_rule, s.p,
                static_cast<unsigned long long>(s.trials), s.censored_fraction);
    if (s.has_median) {
        std::printf(" median_T_total=%.1f median_T_ex=%.1f", s.median_t_total, s.median_t_ex);
    }
    std::printf(" mean_evaluations=%.1f\n", s.mean_evaluations);
}

void write_outputs(const semo_result* result, const semo_config* config, bool with_summary)
{
    const auto out = setting(config, "out");
    if (!out.empty()) {
        check(semo_result_write_records(result, out.c_str(), output_format(config)));
        if (with_summary) {
            const auto summary = setting(config, "summary", out + ".summary.json");
            check(semo_result_write_summary(result, summary.c_str()));
        }
    }
    const auto trace_out = setting(config, "trace-out");
    if (!trace_out.empty()) {
        check(semo_result_write_trace(result, trace_out.c_str()));
    }
}

int do_run(const std::string& config_file, const Overrides& overrides)
{
    auto config = make_config(config_file, overrides);
    output_format(config.get());
    semo_result* raw = nullptr;
    check(semo_run(config.get(), &raw));
    Handle<semo_result> result(raw);
    for (size_t i = 0; i < semo_result_record_count(result.get()); ++i) {
        semo_record r{};
        check(semo_result_record(result.get(), i, &r));
        std::printf("trial=%llu seed=%llu n=%u p=%.6g budget=%llu T_total=%llu%s T_ex=%llu%s iterations=%llu "
                    "evaluations=%llu final_size=%llu\n",
                    static_cast<unsigned long long>(r.trial), static_cast<unsigned long long>(r.seed), r.n, r.p,
                    static_cast<unsigned long long>(r.budget), static_cast<unsigned long long>(r.t_total),
                    r.t_total_censored ? " (censored)" : "", static_cast<unsigned long long>(r.t_ex),
                    r.t_ex_censored ? " (censored)" : "", static_cast<unsigned long long>(r.iterations),
                    static_cast<unsigned long long>(r.evaluations), static_cast<unsigned long long>(r.final_size));
    }
    semo_cell_summary s{};
    check(semo_result_cell(result.get(), 0, &s));
    if (s.trials > 1) {
        print_cell_line(s);
    }
    write_outputs(result.get(), config.get(), false);
    return 0;
}

int do_sweep(const std::string& config_file, const Overrides& overrides)
{
    auto config = make_config(config_file, overrides);
    output_format(config.get());
    semo_result* raw = nullptr;
    check(semo_sweep(config.get(), &raw));
    Handle<semo_result> result(raw);
    for (size_t c = 0; c < semo_result_cell_count(result.get()); ++c) {
        semo_cell_summary s{};
        check(semo_result_cell(result.get(), c, &s));
        print_cell_line(s);
    }
    write_outputs(result.get(), config.get(), true);
    return 0;
}

int do_fit(const std::string& in, const std::string& out)
{
    semo_fit* raw = nullptr;
    check(semo_fit_records_file(in.c_str(), &raw));
    Handle<semo_fit> fit(raw);
    std::printf("%-8s %-12s %6s %10s %12s %10s %14s\n", "variant", "p_rule", "points", "exponent", "constant",
                "residual", "c(n^2 ln n)");
    for (size_t i = 0; i < semo_fit_count(fit.get()); ++i) {
        semo_fit_entry e{};
        check(semo_fit_get(fit.get(), i, &e));
        std::printf("%-8s %-12s %6zu %10.4f %12.6g %10.4g %14.6g\n", e.variant, e.p_rule, e.points, e.exponent,
                    e.constant, e.residual, e.n2logn_prefactor);
    }
    if (semo_fit_count(fit.get()) == 0) {
        std::cerr << "note: no (variant, p_rule) group has uncensored medians at 3 or more sizes\n";
    }
    if (!out.empty()) {
        check(semo_fit_write_json(fit.get(), out.c_str()));
    }
    return 0;
}

int do_validate(bool quick, uint64_t seed)
{
    semo_validation* raw = nullptr;
    check(semo_validate(quick ? 1 : 0, seed, &raw));
    Handle<semo_validation> v(raw);
    for (size_t i = 0; i < semo_validation_check_count(v.get()); ++i) {
        semo_check c{};
        check(semo_validation_check(v.get(), i, &c));
        std::printf("%s %s: violations=%llu (%s)\n", c.passed ? "ok  " : "FAIL", c.name,
                    static_cast<unsigned long long>(c.violations), c.detail);
    }
    return semo_validation_passed(v.get()) ? 0 : SEMO_ERROR_VALIDATION;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app("Noisy SEMO on OneMinMax: single runs, sweeps, scaling fits and invariant validation.", "semo");
    app.footer(kLogNote);
    app.require_subcommand(1);

    Overrides run_flags;
    std::string run_config;
    auto* run = app.add_subcommand("run", "Run one cell and print each run record");
    run->add_option("--config", run_config, "Flat key = value settings file; flags override it");
    add_grid_flags(run, run_flags);

    Overrides sweep_flags;
    std::string sweep_config;
    auto* sweep = app.add_subcommand("sweep", "Run a grid (variant x p x n) from a config file plus overrides");
    sweep->add_option("--config", sweep_config, "Flat key = value settings file; flags override it");
    add_grid_flags(sweep, sweep_flags);
    sweep->add_option("--summary", sweep_flags["summary"], "Summary JSON path (default <out>.summary.json)");
    sweep->add_option("--separation-threshold", sweep_flags["separation-threshold"],
                      "Censored-fraction threshold for separation flags");

    std::string fit_in;
    std::string fit_out;
    auto* fit = app.add_subcommand("fit", "Fit median T_total against n from a records CSV");
    fit->add_option("--in", fit_in, "Records CSV from a previous sweep")->required();
    fit->add_option("--out", fit_out, "Fit JSON output path");

    bool quick = false;
    uint64_t validate_seed = 1;
    auto* validate = app.add_subcommand("validate", "Run the invariant and oracle validation suite");
    validate->add_flag("--quick", quick, "10^4 steps per variant instead of 10^5");
    validate->add_option("--seed", validate_seed, "Seed for the suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return SEMO_ERROR_USAGE;
    }

    try {
        if (*run) {
            return do_run(run_config, run_flags);
        }
        if (*sweep) {
            return do_sweep(sweep_config, sweep_flags);
        }
        if (*fit) {
            return do_fit(fit_in, fit_out);
        }
        return do_validate(quick, validate_seed);
    } catch (const Failure& f) {
        return f.status;
    }
}
