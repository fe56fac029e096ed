/* SPDX-License-Identifier: Apache-2.0 */
#ifndef SEMO_SEMO_H
#define SEMO_SEMO_H

/*
 * C interface to the noisy SEMO simulation library.
 *
 * All objects are opaque handles created by a *_create / producing call and
 * released by the matching *_destroy. Every fallible call returns a
 * semo_status; on failure semo_last_error() describes the problem for the
 * calling thread until its next failing call. Strings returned through
 * out-structs are owned by the handle they came from.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SEMO_BUILDING_LIBRARY)
#    define SEMO_API __declspec(dllexport)
#  else
#    define SEMO_API __declspec(dllimport)
#  endif
#else
#  define SEMO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as process exit codes of the command-line tool. */
typedef enum semo_status {
    SEMO_OK = 0,
    SEMO_ERROR_IO = 1,
    SEMO_ERROR_USAGE = 2,
    SEMO_ERROR_VALIDATION = 3,
    SEMO_ERROR_INTERNAL = 4
} semo_status;

typedef enum semo_variant {
    SEMO_VARIANT_CACHED = 0,
    SEMO_VARIANT_REEVAL = 1,
    SEMO_VARIANT_KEEP = 2
} semo_variant;

typedef enum semo_format {
    SEMO_FORMAT_CSV = 0,
    SEMO_FORMAT_JSON = 1
} semo_format;

#define SEMO_KEEP_UNBOUNDED UINT64_MAX

typedef struct semo_config semo_config;
typedef struct semo_result semo_result;
typedef struct semo_fit semo_fit;
typedef struct semo_validation semo_validation;
typedef struct semo_process semo_process;

SEMO_API const char* semo_version(void);
SEMO_API const char* semo_last_error(void);

/* ---- Settings ---------------------------------------------------------- */

/* Keys: n, p, variant, K, trials, budget-multiple, budget, seed, trace,
 * mode, workers, out, format, summary, trace-out, separation-threshold.
 * List-valued keys (n, p, variant) take comma-separated values. */
SEMO_API semo_status semo_config_create(semo_config** out);
SEMO_API void semo_config_destroy(semo_config* config);
SEMO_API semo_status semo_config_set(semo_config* config, const char* key, const char* value);
/* Flat "key = value" file; overrides keys already set. */
SEMO_API semo_status semo_config_load_file(semo_config* config, const char* path);
/* Returns NULL when the key is unset. */
SEMO_API const char* semo_config_get(const semo_config* config, const char* key);

/* ---- Runs and sweeps --------------------------------------------------- */

typedef struct semo_record {
    size_t cell;
    uint64_t trial;
    uint64_t seed;
    semo_variant variant;
    uint64_t keep_limit;
    uint32_t n;
    double p;
    uint64_t budget;
    uint64_t t_total;
    int t_total_censored;
    uint64_t t_ex;
    int t_ex_censored;
    uint64_t iterations;
    uint64_t evaluations;
    uint64_t final_size;
} semo_record;

typedef struct semo_cell_summary {
    uint32_t n;
    double p;
    const char* p_rule;
    const char* variant;
    uint64_t budget;
    uint64_t trials;
    uint64_t uncensored;
    double censored_fraction;
    /* Medians over uncensored trials; valid only when has_median is set. */
    int has_median;
    double median_t_total;
    double median_t_ex;
    double mean_evaluations;
} semo_cell_summary;

/* Single cell: every list-valued key must hold exactly one value. */
SEMO_API semo_status semo_run(const semo_config* config, semo_result** out);
/* Full grid: every combination of variant x p x n. */
SEMO_API semo_status semo_sweep(const semo_config* config, semo_result** out);
SEMO_API void semo_result_destroy(semo_result* result);

SEMO_API size_t semo_result_record_count(const semo_result* result);
SEMO_API semo_status semo_result_record(const semo_result* result, size_t index, semo_record* out);
SEMO_API size_t semo_result_cell_count(const semo_result* result);
SEMO_API semo_status semo_result_cell(const semo_result* result, size_t index, semo_cell_summary* out);

/* Records, one row/object per run, preceded by the resolved configuration. */
SEMO_API semo_status semo_result_write_records(const semo_result* result, const char* path, semo_format format);
/* JSON with per-cell summaries, scaling fits and the cached/reeval separation table. */
SEMO_API semo_status semo_result_write_summary(const semo_result* result, const char* path);
/* Trace samples (columns t,L,d,ell,j,covered,extremes_noisy,extremes_true). */
SEMO_API semo_status semo_result_write_trace(const semo_result* result, const char* path);

/* ---- Scaling fits ------------------------------------------------------ */

typedef struct semo_fit_entry {
    const char* variant;
    const char* p_rule;
    size_t points;
    double exponent;
    double constant;
    double residual;
    double n2logn_exponent;
    double n2logn_prefactor;
} semo_fit_entry;

/* Reads a records CSV and fits median T_total against n per (variant, rule). */
SEMO_API semo_status semo_fit_records_file(const char* csv_path, semo_fit** out);
SEMO_API void semo_fit_destroy(semo_fit* fit);
SEMO_API size_t semo_fit_count(const semo_fit* fit);
SEMO_API semo_status semo_fit_get(const semo_fit* fit, size_t index, semo_fit_entry* out);
SEMO_API semo_status semo_fit_write_json(const semo_fit* fit, const char* path);

/* ---- Validation suite -------------------------------------------------- */

typedef struct semo_check {
    const char* name;
    int passed;
    uint64_t violations;
    const char* detail;
} semo_check;

/* Runs the invariant suite. Returns SEMO_OK when it ran; inspect
 * semo_validation_passed for the verdict. */
SEMO_API semo_status semo_validate(int quick, uint64_t seed, semo_validation** out);
SEMO_API void semo_validation_destroy(semo_validation* validation);
SEMO_API int semo_validation_passed(const semo_validation* validation);
SEMO_API size_t semo_validation_check_count(const semo_validation* validation);
SEMO_API semo_status semo_validation_check(const semo_validation* validation, size_t index, semo_check* out);

/* ---- Stepwise process -------------------------------------------------- */

/* keep_limit is only used by SEMO_VARIANT_KEEP. */
SEMO_API semo_status semo_process_create(uint32_t n, double p, semo_variant variant, uint64_t keep_limit,
                                         uint64_t seed, semo_process** out);
SEMO_API void semo_process_destroy(semo_process* process);
SEMO_API semo_status semo_process_step(semo_process* process, uint64_t steps);
SEMO_API uint64_t semo_process_iteration(const semo_process* process);
SEMO_API uint64_t semo_process_evaluations(const semo_process* process);
SEMO_API size_t semo_process_size(const semo_process* process);
/* Writes member `index` as a NUL-terminated 0/1 string; buffer needs n + 1 bytes. */
SEMO_API semo_status semo_process_member(const semo_process* process, size_t index, char* buffer, size_t buffer_size);
/* Stored noisy first component of a cached member; SEMO_ERROR_USAGE for other variants. */
SEMO_API semo_status semo_process_stored_value(const semo_process* process, size_t index, int64_t* out);
SEMO_API int semo_process_covered(const semo_process* process);

#ifdef __cplusplus
}
#endif

#endif /* SEMO_SEMO_H */
