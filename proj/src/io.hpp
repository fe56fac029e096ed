// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "experiments.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace semo {

inline constexpr int kSchemaVersion = 1;

/// Flat key/value settings shared by config files and command-line flags.
/// Keys are validated on assignment; later assignments override earlier ones.
class Settings {
public:
    /// Throws UsageError for an unknown key.
    void set(std::string_view key, std::string_view value);
    bool has(std::string_view key) const;
    /// Value or `fallback`.
    std::string get(std::string_view key, std::string_view fallback = "") const;

    /// Reads "key = value" lines; blank lines and '#' comments are skipped.
    /// Throws IoError when the file cannot be read and UsageError (with the
    /// line number) for malformed lines.
    void load_file(const std::string& path);
    void load(std::istream& in, const std::string& origin);

    static const std::vector<std::string>& known_keys();

private:
    std::map<std::string, std::string, std::less<>> values_;
};

/// Fully resolved sweep grid. Throws UsageError (rule strings carry
/// positions) for any invalid value.
SweepGrid resolve_grid(const Settings& settings);

unsigned resolve_workers(const Settings& settings);
double resolve_separation_threshold(const Settings& settings);

/// Ordered key/value echo of a grid: enough to replay it exactly. Excludes
/// worker count and output paths, which do not affect results.
std::vector<std::pair<std::string, std::string>> describe(const SweepGrid& grid);

/// Shortest decimal that round-trips.
std::string format_double(double value);

std::string format_keep(std::uint64_t keep_limit);

// ---------------------------------------------------------------------------
// Records CSV

/// Column order of the records CSV.
inline constexpr std::string_view kRecordColumns =
    "cell,variant,K,n,p_rule,p,trial,seed,budget,T_total,T_total_censored,T_ex,T_ex_censored,"
    "iterations,evaluations,final_size";

/// Comment lines echoing the grid, then the column header, then one row per
/// run record.
void write_records_csv(std::ostream& out, const SweepResult& result);

/// Same content as JSON.
void write_records_json(std::ostream& out, const SweepResult& result);

inline constexpr std::string_view kTraceColumns = "t,L,d,ell,j,covered,extremes_noisy,extremes_true";

/// Grid echo, the trace header, then for each traced run a "# cell=.. trial=.."
/// marker followed by its samples. Fields that do not apply are left empty.
void write_trace_csv(std::ostream& out, const SweepResult& result);

/// One parsed row of a records CSV.
struct CsvRecord {
    std::size_t cell = 0;
    VariantSpec variant;
    std::string p_rule;
    std::uint64_t trial = 0;
    RunRecord record;
};

/// Parses a records CSV written by write_records_csv. Throws UsageError with
/// the line number on malformed content.
std::vector<CsvRecord> read_records_csv(std::istream& in);

// ---------------------------------------------------------------------------
// Fits and summary JSON

struct FitEntry {
    std::string variant;
    std::string p_rule;
    std::vector<ScalingPoint> points;
    ScalingFit by_n;
    ScalingFit by_n2logn;
};

/// Per (variant, rule) group with at least 3 problem sizes that have an
/// uncensored median: fits of median T_total against n and n^2 ln n.
std::vector<FitEntry> fit_medians(std::span<const CellSummary> summaries);

/// Rebuilds per-cell summaries from parsed CSV rows.
std::vector<CellSummary> summaries_from_csv(std::span<const CsvRecord> rows);

void write_summary_json(std::ostream& out, const SweepResult& result, double separation_threshold);
void write_fits_json(std::ostream& out, std::span<const FitEntry> fits);

} // namespace semo
