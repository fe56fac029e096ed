// SPDX-License-Identifier: Apache-2.0
#include "io.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace semo {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto at = s.find(sep, start);
        parts.push_back(s.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
        if (at == std::string_view::npos) {
            return parts;
        }
        start = at + 1;
    }
}

template <class T>
T parse_number(std::string_view text, std::string_view what)
{
    T value{};
    text = trim(text);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw UsageError("invalid " + std::string(what) + " '" + std::string(text) + "'");
    }
    return value;
}

TraceOptions parse_trace(std::string_view text)
{
    if (text == "off") {
        return {0};
    }
    if (text == "full") {
        return {1};
    }
    if (text.starts_with("stride:")) {
        const auto stride = parse_number<std::uint64_t>(text.substr(7), "trace stride");
        if (stride == 0) {
            throw UsageError("trace stride must be at least 1");
        }
        return {stride};
    }
    throw UsageError("invalid trace option '" + std::string(text) + "' (expected off, full or stride:S)");
}

std::string format_trace(TraceOptions trace)
{
    if (trace.stride == 0) {
        return "off";
    }
    if (trace.stride == 1) {
        return "full";
    }
    return "stride:" + std::to_string(trace.stride);
}

std::uint64_t parse_keep(std::string_view text)
{
    if (trim(text) == "inf") {
        return kUnboundedKeep;
    }
    return parse_number<std::uint64_t>(text, "K");
}

VariantSpec parse_variant_for_csv(std::string_view name, std::string_view keep)
{
    const auto k = parse_keep(keep);
    if (name == "keep") {
        return {Variant::ExtremeKeeping, k};
    }
    return VariantSpec::parse(name, k);
}

ordered_json quantiles_json(const std::optional<Quantiles>& q)
{
    if (!q) {
        return nullptr;
    }
    return ordered_json{{"min", q->min},       {"q25", q->q25}, {"median", q->median},
                        {"q75", q->q75},       {"max", q->max}, {"mean", q->mean}};
}

ordered_json config_json(const SweepGrid& grid)
{
    ordered_json config = ordered_json::object();
    for (const auto& [key, value] : describe(grid)) {
        config[key] = value;
    }
    return config;
}

} // namespace

// ---------------------------------------------------------------------------
// Settings

const std::vector<std::string>& Settings::known_keys()
{
    static const std::vector<std::string> keys = {
        "n",    "p",       "variant", "K",       "trials",  "budget-multiple",      "budget",
        "seed", "trace",   "mode",    "workers", "out",     "format",               "summary",
        "trace-out", "separation-threshold",
    };
    return keys;
}

void Settings::set(std::string_view key, std::string_view value)
{
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        throw UsageError("unknown setting '" + std::string(key) + "'");
    }
    values_[std::string(key)] = std::string(trim(value));
}

bool Settings::has(std::string_view key) const { return values_.find(key) != values_.end(); }

std::string Settings::get(std::string_view key, std::string_view fallback) const
{
    const auto it = values_.find(key);
    return it == values_.end() ? std::string(fallback) : it->second;
}

void Settings::load_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file '" + path + "'");
    }
    load(in, path);
}

void Settings::load(std::istream& in, const std::string& origin)
{
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        auto body = trim(line);
        if (body.empty() || body.front() == '#') {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            throw UsageError(origin + ":" + std::to_string(number) + ": expected 'key = value'");
        }
        const auto key = trim(body.substr(0, eq));
        try {
            set(key, body.substr(eq + 1));
        } catch (const UsageError& e) {
            throw UsageError(origin + ":" + std::to_string(number) + ": " + e.what());
        }
    }
}

SweepGrid resolve_grid(const Settings& settings)
{
    SweepGrid grid;
    if (!settings.has("n")) {
        throw UsageError("missing required setting 'n'");
    }
    const auto n_text = settings.get("n");
    const auto p_text = settings.get("p", "0");
    const auto variant_text = settings.get("variant", "cached");
    for (const auto part : split(n_text, ',')) {
        const auto n = parse_number<std::size_t>(part, "problem size");
        if (n == 0) {
            throw UsageError("problem size n must be at least 1");
        }
        grid.n_values.push_back(n);
    }
    for (const auto part : split(p_text, ',')) {
        grid.p_rules.push_back(NoiseRule::parse(trim(part)));
    }
    const auto keep = parse_keep(settings.get("K", "0"));
    for (const auto part : split(variant_text, ',')) {
        grid.variants.push_back(VariantSpec::parse(trim(part), keep));
    }
    grid.trials = parse_number<std::uint64_t>(settings.get("trials", "1"), "trial count");
    if (grid.trials == 0) {
        throw UsageError("trials must be at least 1");
    }
    grid.budget.multiple = parse_number<double>(settings.get("budget-multiple", "20"), "budget multiple");
    if (!(grid.budget.multiple >= 0)) {
        throw UsageError("budget multiple must be non-negative");
    }
    if (settings.has("budget")) {
        grid.budget.absolute = parse_number<std::uint64_t>(settings.get("budget"), "budget");
    }
    grid.master_seed = parse_number<std::uint64_t>(settings.get("seed", "1"), "seed");
    grid.trace = parse_trace(settings.get("trace", "off"));
    const auto mode = settings.get("mode", "fast");
    if (mode == "fast") {
        grid.mode = DominanceMode::OneMinMaxFastPath;
    } else if (mode == "general") {
        grid.mode = DominanceMode::General;
    } else {
        throw UsageError("invalid mode '" + mode + "' (expected fast or general)");
    }
    // Evaluate every cell once so out-of-range rules fail before any work.
    for (const auto& rule : grid.p_rules) {
        for (const auto n : grid.n_values) {
            rule.evaluate(n);
        }
    }
    return grid;
}

unsigned resolve_workers(const Settings& settings)
{
    const auto w = parse_number<unsigned>(settings.get("workers", "1"), "worker count");
    return w == 0 ? 1 : w;
}

double resolve_separation_threshold(const Settings& settings)
{
    return parse_number<double>(settings.get("separation-threshold", "0.5"), "separation threshold");
}

std::string format_double(double value)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

std::string format_keep(std::uint64_t keep_limit)
{
    return keep_limit == kUnboundedKeep ? "inf" : std::to_string(keep_limit);
}

std::vector<std::pair<std::string, std::string>> describe(const SweepGrid& grid)
{
    auto join = [](const auto& items, auto&& fmt) {
        std::string out;
        for (const auto& item : items) {
            if (!out.empty()) {
                out += ',';
            }
            out += fmt(item);
        }
        return out;
    };
    std::vector<std::pair<std::string, std::string>> out;
    out.emplace_back("schema_version", std::to_string(kSchemaVersion));
    out.emplace_back("n", join(grid.n_values, [](std::size_t n) { return std::to_string(n); }));
    out.emplace_back("p", join(grid.p_rules, [](const NoiseRule& r) { return r.text(); }));
    out.emplace_back("variant", join(grid.variants, [](const VariantSpec& v) { return v.label(); }));
    out.emplace_back("trials", std::to_string(grid.trials));
    if (grid.budget.absolute) {
        out.emplace_back("budget", std::to_string(*grid.budget.absolute));
    } else {
        out.emplace_back("budget-multiple", format_double(grid.budget.multiple));
    }
    out.emplace_back("seed", std::to_string(grid.master_seed));
    out.emplace_back("trace", format_trace(grid.trace));
    out.emplace_back("mode", grid.mode == DominanceMode::General ? "general" : "fast");
    return out;
}

// ---------------------------------------------------------------------------
// Records

void write_records_csv(std::ostream& out, const SweepResult& result)
{
    out << "# semo-noise records\n";
    for (const auto& [key, value] : describe(result.grid)) {
        out << "# " << key << '=' << value << '\n';
    }
    out << kRecordColumns << '\n';
    for (std::size_t c = 0; c < result.cells.size(); ++c) {
        const auto& cell = result.cells[c];
        const auto& params = cell.params;
        for (std::size_t t = 0; t < cell.records.size(); ++t) {
            const auto& r = cell.records[t];
            out << c << ',' << to_string(params.variant.variant) << ',' << format_keep(params.variant.keep_limit) << ','
                << r.n << ',' << params.p_rule << ',' << format_double(r.p) << ',' << t << ',' << r.seed << ','
                << r.budget << ',' << r.total.value << ',' << (r.total.censored ? 1 : 0) << ',' << r.extremes.value
                << ',' << (r.extremes.censored ? 1 : 0) << ',' << r.iterations << ',' << r.evaluations << ','
                << r.final_size << '\n';
        }
    }
}

void write_records_json(std::ostream& out, const SweepResult& result)
{
    ordered_json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["config"] = config_json(result.grid);
    doc["records"] = ordered_json::array();
    for (std::size_t c = 0; c < result.cells.size(); ++c) {
        const auto& cell = result.cells[c];
        for (std::size_t t = 0; t < cell.records.size(); ++t) {
            const auto& r = cell.records[t];
            doc["records"].push_back(ordered_json{
                {"cell", c},
                {"variant", std::string(to_string(cell.params.variant.variant))},
                {"K", format_keep(cell.params.variant.keep_limit)},
                {"n", r.n},
                {"p_rule", cell.params.p_rule},
                {"p", r.p},
                {"trial", t},
                {"seed", r.seed},
                {"budget", r.budget},
                {"T_total", r.total.value},
                {"T_total_censored", r.total.censored},
                {"T_ex", r.extremes.value},
                {"T_ex_censored", r.extremes.censored},
                {"iterations", r.iterations},
                {"evaluations", r.evaluations},
                {"final_size", r.final_size},
            });
        }
    }
    out << doc.dump(2) << '\n';
}

void write_trace_csv(std::ostream& out, const SweepResult& result)
{
    out << "# semo-noise trace\n";
    for (const auto& [key, value] : describe(result.grid)) {
        out << "# " << key << '=' << value << '\n';
    }
    out << kTraceColumns << '\n';
    auto opt = [](const auto& v) { return v ? std::to_string(*v) : std::string(); };
    for (std::size_t c = 0; c < result.cells.size(); ++c) {
        const auto& cell = result.cells[c];
        for (std::size_t t = 0; t < cell.records.size(); ++t) {
            const auto& r = cell.records[t];
            out << "# cell=" << c << " trial=" << t << " seed=" << r.seed << '\n';
            for (const auto& s : r.trace) {
                out << s.t << ',' << s.L << ',' << s.d << ',' << opt(s.ell) << ',' << opt(s.j) << ','
                    << (s.covered ? 1 : 0) << ','
                    << (s.extremes_noisy ? std::to_string(*s.extremes_noisy ? 1 : 0) : std::string()) << ','
                    << (s.extremes_true ? 1 : 0) << '\n';
            }
        }
    }
}

std::vector<CsvRecord> read_records_csv(std::istream& in)
{
    std::vector<CsvRecord> rows;
    std::string line;
    std::size_t number = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++number;
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') {
            continue;
        }
        if (!header_seen) {
            if (body != kRecordColumns) {
                throw UsageError("line " + std::to_string(number) + ": unexpected records header");
            }
            header_seen = true;
            continue;
        }
        const auto f = split(body, ',');
        if (f.size() != 16) {
            throw UsageError("line " + std::to_string(number) + ": expected 16 fields, found " +
                             std::to_string(f.size()));
        }
        try {
            CsvRecord row;
            row.cell = parse_number<std::size_t>(f[0], "cell");
            row.variant = parse_variant_for_csv(f[1], f[2]);
            row.p_rule = std::string(f[4]);
            row.trial = parse_number<std::uint64_t>(f[6], "trial");
            auto& r = row.record;
            r.variant = row.variant.variant;
            r.keep_limit = row.variant.keep_limit;
            r.n = parse_number<std::size_t>(f[3], "n");
            r.p = parse_number<double>(f[5], "p");
            r.seed = parse_number<std::uint64_t>(f[7], "seed");
            r.budget = parse_number<std::uint64_t>(f[8], "budget");
            r.total = {parse_number<std::uint64_t>(f[9], "T_total"), parse_number<int>(f[10], "censor flag") != 0};
            r.extremes = {parse_number<std::uint64_t>(f[11], "T_ex"), parse_number<int>(f[12], "censor flag") != 0};
            r.iterations = parse_number<std::uint64_t>(f[13], "iterations");
            r.evaluations = parse_number<std::uint64_t>(f[14], "evaluations");
            r.final_size = parse_number<std::size_t>(f[15], "final size");
            rows.push_back(std::move(row));
        } catch (const UsageError& e) {
            throw UsageError("line " + std::to_string(number) + ": " + e.what());
        }
    }
    if (!header_seen) {
        throw UsageError("records file has no header row");
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Fits and summaries

std::vector<FitEntry> fit_medians(std::span<const CellSummary> summaries)
{
    std::map<std::pair<std::string, std::string>, std::map<std::size_t, double>> groups;
    for (const auto& s : summaries) {
        auto& points = groups[{s.variant.label(), s.p_rule}];
        if (s.total) {
            points[s.n] = s.total->median;
        }
    }
    std::vector<FitEntry> fits;
    for (const auto& [key, by_n] : groups) {
        std::vector<ScalingPoint> points;
        for (const auto& [n, median] : by_n) {
            if (n >= 2 && median > 0) {
                points.push_back({static_cast<double>(n), median});
            }
        }
        if (points.size() < 3) {
            continue;
        }
        FitEntry e;
        e.variant = key.first;
        e.p_rule = key.second;
        e.points = points;
        e.by_n = fit_scaling(points, Regressor::N);
        e.by_n2logn = fit_scaling(points, Regressor::NSquaredLogN);
        fits.push_back(std::move(e));
    }
    return fits;
}

std::vector<CellSummary> summaries_from_csv(std::span<const CsvRecord> rows)
{
    std::map<std::size_t, std::vector<const CsvRecord*>> cells;
    for (const auto& row : rows) {
        cells[row.cell].push_back(&row);
    }
    std::vector<CellSummary> out;
    for (const auto& [index, members] : cells) {
        CellParams params;
        const auto& first = *members.front();
        params.n = first.record.n;
        params.p = first.record.p;
        params.p_rule = first.p_rule;
        params.variant = first.variant;
        params.budget = first.record.budget;
        std::vector<RunRecord> records;
        for (const auto* m : members) {
            records.push_back(m->record);
        }
        out.push_back(summarize(params, records));
    }
    return out;
}

namespace {

ordered_json fit_json(const FitEntry& e)
{
    ordered_json points = ordered_json::array();
    for (const auto& p : e.points) {
        points.push_back({{"n", p.n}, {"median_T_total", p.value}});
    }
    return ordered_json{
        {"variant", e.variant},
        {"p_rule", e.p_rule},
        {"statistic", "median_T_total"},
        {"points", points},
        {"exponent", e.by_n.exponent},
        {"constant", e.by_n.constant},
        {"residual", e.by_n.residual},
        {"n2logn_exponent", e.by_n2logn.exponent},
        {"n2logn_prefactor", e.by_n2logn.constant},
        {"n2logn_residual", e.by_n2logn.residual},
    };
}

} // namespace

void write_summary_json(std::ostream& out, const SweepResult& result, double separation_threshold)
{
    ordered_json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["config"] = config_json(result.grid);
    doc["config"]["separation-threshold"] = format_double(separation_threshold);

    std::vector<CellSummary> summaries;
    ordered_json cells = ordered_json::array();
    for (std::size_t c = 0; c < result.cells.size(); ++c) {
        const auto& s = result.cells[c].summary;
        summaries.push_back(s);
        cells.push_back(ordered_json{
            {"cell", c},
            {"variant", s.variant.label()},
            {"n", s.n},
            {"p_rule", s.p_rule},
            {"p", s.p},
            {"budget", s.budget},
            {"trials", s.trials},
            {"uncensored", s.uncensored},
            {"censored_fraction", s.censored_fraction},
            {"T_total", quantiles_json(s.total)},
            {"T_ex", quantiles_json(s.extremes)},
            {"evaluations_uncensored", quantiles_json(s.total_evaluations)},
            {"mean_evaluations", s.mean_evaluations},
        });
    }
    doc["cells"] = cells;

    ordered_json fits = ordered_json::array();
    for (const auto& e : fit_medians(summaries)) {
        fits.push_back(fit_json(e));
    }
    doc["fits"] = fits;

    ordered_json separation = ordered_json::array();
    auto opt = [](const std::optional<double>& v) -> ordered_json { return v ? ordered_json(*v) : ordered_json(nullptr); };
    for (const auto& row : separation_report(summaries, separation_threshold)) {
        separation.push_back(ordered_json{
            {"n", row.n},
            {"p_rule", row.p_rule},
            {"p", row.p},
            {"cached_median", opt(row.cached_median)},
            {"reeval_median", opt(row.reeval_median)},
            {"median_ratio", opt(row.median_ratio)},
            {"cached_censored_fraction", row.cached_censored},
            {"reeval_censored_fraction", row.reeval_censored},
            {"flagged", row.flagged},
        });
    }
    doc["separation"] = separation;
    out << doc.dump(2) << '\n';
}

void write_fits_json(std::ostream& out, std::span<const FitEntry> fits)
{
    ordered_json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["fits"] = ordered_json::array();
    for (const auto& e : fits) {
        doc["fits"].push_back(fit_json(e));
    }
    out << doc.dump(2) << '\n';
}

} // namespace semo
