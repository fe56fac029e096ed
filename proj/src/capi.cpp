// SPDX-License-Identifier: Apache-2.0
#include "semo/semo.h"

#include "diagnostics.hpp"
#include "io.hpp"
#include "validate.hpp"

#include <exception>
#include <fstream>
#include <memory>
#include <new>
#include <string>

struct semo_config {
    semo::Settings settings;
    std::string scratch;
};

struct semo_result {
    semo::SweepResult sweep;
    double separation_threshold = 0.5;
    std::vector<std::string> variant_labels;
};

struct semo_fit {
    std::vector<semo::FitEntry> fits;
};

struct semo_validation {
    std::vector<semo::ValidationCheck> checks;
};

struct semo_process {
    semo::SemoProcess process;
};

namespace {

thread_local std::string g_last_error;

template <class F>
semo_status guarded(F&& body) noexcept
{
    try {
        body();
        return SEMO_OK;
    } catch (const semo::UsageError& e) {
        g_last_error = e.what();
        return SEMO_ERROR_USAGE;
    } catch (const semo::IoError& e) {
        g_last_error = e.what();
        return SEMO_ERROR_IO;
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return SEMO_ERROR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SEMO_ERROR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return SEMO_ERROR_INTERNAL;
    }
}

void require(bool condition, const char* message)
{
    if (!condition) {
        throw semo::UsageError(message);
    }
}

semo_variant to_c(semo::Variant v)
{
    switch (v) {
    case semo::Variant::Cached:
        return SEMO_VARIANT_CACHED;
    case semo::Variant::Reeval:
        return SEMO_VARIANT_REEVAL;
    case semo::Variant::ExtremeKeeping:
        return SEMO_VARIANT_KEEP;
    }
    return SEMO_VARIANT_CACHED;
}

std::ofstream open_output(const char* path)
{
    require(path != nullptr && *path != '\0', "output path is empty");
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw semo::IoError(std::string("cannot open '") + path + "' for writing");
    }
    return out;
}

void close_output(std::ofstream& out, const char* path)
{
    out.close();
    if (!out) {
        throw semo::IoError(std::string("failed writing '") + path + "'");
    }
}

semo_result* make_result(const semo::Settings& settings, bool single_cell)
{
    const auto grid = semo::resolve_grid(settings);
    if (single_cell) {
        require(grid.n_values.size() == 1 && grid.p_rules.size() == 1 && grid.variants.size() == 1,
                "run takes a single n, p and variant; use sweep for lists");
    }
    auto result = std::make_unique<semo_result>();
    result->separation_threshold = semo::resolve_separation_threshold(settings);
    result->sweep = semo::run_sweep(grid, semo::resolve_workers(settings));
    for (const auto& cell : result->sweep.cells) {
        result->variant_labels.push_back(cell.summary.variant.label());
    }
    return result.release();
}

} // namespace

extern "C" {

const char* semo_version(void) { return "1.0.0"; }

const char* semo_last_error(void) { return g_last_error.c_str(); }

semo_status semo_config_create(semo_config** out)
{
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        *out = new semo_config;
    });
}

void semo_config_destroy(semo_config* config) { delete config; }

semo_status semo_config_set(semo_config* config, const char* key, const char* value)
{
    return guarded([&] {
        require(config && key && value, "null argument");
        config->settings.set(key, value);
    });
}

semo_status semo_config_load_file(semo_config* config, const char* path)
{
    return guarded([&] {
        require(config && path, "null argument");
        config->settings.load_file(path);
    });
}

const char* semo_config_get(const semo_config* config, const char* key)
{
    if (!config || !key || !config->settings.has(key)) {
        return nullptr;
    }
    auto* mutable_config = const_cast<semo_config*>(config);
    mutable_config->scratch = config->settings.get(key);
    return mutable_config->scratch.c_str();
}

semo_status semo_run(const semo_config* config, semo_result** out)
{
    return guarded([&] {
        require(config && out, "null argument");
        *out = make_result(config->settings, true);
    });
}

semo_status semo_sweep(const semo_config* config, semo_result** out)
{
    return guarded([&] {
        require(config && out, "null argument");
        *out = make_result(config->settings, false);
    });
}

void semo_result_destroy(semo_result* result) { delete result; }

size_t semo_result_record_count(const semo_result* result)
{
    if (!result) {
        return 0;
    }
    size_t count = 0;
    for (const auto& cell : result->sweep.cells) {
        count += cell.records.size();
    }
    return count;
}

semo_status semo_result_record(const semo_result* result, size_t index, semo_record* out)
{
    return guarded([&] {
        require(result && out, "null argument");
        for (size_t c = 0; c < result->sweep.cells.size(); ++c) {
            const auto& cell = result->sweep.cells[c];
            if (index < cell.records.size()) {
                const auto& r = cell.records[index];
                *out = semo_record{};
                out->cell = c;
                out->trial = index;
                out->seed = r.seed;
                out->variant = to_c(r.variant);
                out->keep_limit = r.keep_limit;
                out->n = static_cast<uint32_t>(r.n);
                out->p = r.p;
                out->budget = r.budget;
                out->t_total = r.total.value;
                out->t_total_censored = r.total.censored ? 1 : 0;
                out->t_ex = r.extremes.value;
                out->t_ex_censored = r.extremes.censored ? 1 : 0;
                out->iterations = r.iterations;
                out->evaluations = r.evaluations;
                out->final_size = r.final_size;
                return;
            }
            index -= cell.records.size();
        }
        throw semo::UsageError("record index out of range");
    });
}

size_t semo_result_cell_count(const semo_result* result) { return result ? result->sweep.cells.size() : 0; }

semo_status semo_result_cell(const semo_result* result, size_t index, semo_cell_summary* out)
{
    return guarded([&] {
        require(result && out, "null argument");
        require(index < result->sweep.cells.size(), "cell index out of range");
        const auto& s = result->sweep.cells[index].summary;
        *out = semo_cell_summary{};
        out->n = static_cast<uint32_t>(s.n);
        out->p = s.p;
        out->p_rule = s.p_rule.c_str();
        out->variant = result->variant_labels[index].c_str();
        out->budget = s.budget;
        out->trials = s.trials;
        out->uncensored = s.uncensored;
        out->censored_fraction = s.censored_fraction;
        out->has_median = s.total ? 1 : 0;
        out->median_t_total = s.total ? s.total->median : 0.0;
        out->median_t_ex = s.total && s.extremes ? s.extremes->median : 0.0;
        out->mean_evaluations = s.mean_evaluations;
    });
}

semo_status semo_result_write_records(const semo_result* result, const char* path, semo_format format)
{
    return guarded([&] {
        require(result != nullptr, "null argument");
        auto out = open_output(path);
        if (format == SEMO_FORMAT_JSON) {
            semo::write_records_json(out, result->sweep);
        } else {
            semo::write_records_csv(out, result->sweep);
        }
        close_output(out, path);
    });
}

semo_status semo_result_write_summary(const semo_result* result, const char* path)
{
    return guarded([&] {
        require(result != nullptr, "null argument");
        auto out = open_output(path);
        semo::write_summary_json(out, result->sweep, result->separation_threshold);
        close_output(out, path);
    });
}

semo_status semo_result_write_trace(const semo_result* result, const char* path)
{
    return guarded([&] {
        require(result != nullptr, "null argument");
        auto out = open_output(path);
        semo::write_trace_csv(out, result->sweep);
        close_output(out, path);
    });
}

semo_status semo_fit_records_file(const char* csv_path, semo_fit** out)
{
    return guarded([&] {
        require(csv_path && out, "null argument");
        std::ifstream in(csv_path);
        if (!in) {
            throw semo::IoError(std::string("cannot open '") + csv_path + "'");
        }
        const auto rows = semo::read_records_csv(in);
        const auto summaries = semo::summaries_from_csv(rows);
        auto fit = std::make_unique<semo_fit>();
        fit->fits = semo::fit_medians(summaries);
        *out = fit.release();
    });
}

void semo_fit_destroy(semo_fit* fit) { delete fit; }

size_t semo_fit_count(const semo_fit* fit) { return fit ? fit->fits.size() : 0; }

semo_status semo_fit_get(const semo_fit* fit, size_t index, semo_fit_entry* out)
{
    return guarded([&] {
        require(fit && out, "null argument");
        require(index < fit->fits.size(), "fit index out of range");
        const auto& e = fit->fits[index];
        out->variant = e.variant.c_str();
        out->p_rule = e.p_rule.c_str();
        out->points = e.points.size();
        out->exponent = e.by_n.exponent;
        out->constant = e.by_n.constant;
        out->residual = e.by_n.residual;
        out->n2logn_exponent = e.by_n2logn.exponent;
        out->n2logn_prefactor = e.by_n2logn.constant;
    });
}

semo_status semo_fit_write_json(const semo_fit* fit, const char* path)
{
    return guarded([&] {
        require(fit != nullptr, "null argument");
        auto out = open_output(path);
        semo::write_fits_json(out, fit->fits);
        close_output(out, path);
    });
}

semo_status semo_validate(int quick, uint64_t seed, semo_validation** out)
{
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        auto v = std::make_unique<semo_validation>();
        v->checks = semo::run_validation({quick != 0, seed});
        *out = v.release();
    });
}

void semo_validation_destroy(semo_validation* validation) { delete validation; }

int semo_validation_passed(const semo_validation* validation)
{
    if (!validation) {
        return 0;
    }
    for (const auto& c : validation->checks) {
        if (!c.passed) {
            return 0;
        }
    }
    return 1;
}

size_t semo_validation_check_count(const semo_validation* validation)
{
    return validation ? validation->checks.size() : 0;
}

semo_status semo_validation_check(const semo_validation* validation, size_t index, semo_check* out)
{
    return guarded([&] {
        require(validation && out, "null argument");
        require(index < validation->checks.size(), "check index out of range");
        const auto& c = validation->checks[index];
        out->name = c.name.c_str();
        out->passed = c.passed ? 1 : 0;
        out->violations = c.violations;
        out->detail = c.detail.c_str();
    });
}

semo_status semo_process_create(uint32_t n, double p, semo_variant variant, uint64_t keep_limit, uint64_t seed,
                                semo_process** out)
{
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        semo::AlgorithmConfig config;
        config.n = n;
        config.noise = semo::NoiseSpec(p);
        switch (variant) {
        case SEMO_VARIANT_CACHED:
            config.variant = semo::Variant::Cached;
            break;
        case SEMO_VARIANT_REEVAL:
            config.variant = semo::Variant::Reeval;
            break;
        case SEMO_VARIANT_KEEP:
            config.variant = semo::Variant::ExtremeKeeping;
            break;
        default:
            throw semo::UsageError("unknown variant");
        }
        config.keep_limit = keep_limit;
        *out = new semo_process{semo::SemoProcess(config, seed)};
    });
}

void semo_process_destroy(semo_process* process) { delete process; }

semo_status semo_process_step(semo_process* process, uint64_t steps)
{
    return guarded([&] {
        require(process != nullptr, "null argument");
        for (uint64_t i = 0; i < steps; ++i) {
            process->process.step();
        }
    });
}

uint64_t semo_process_iteration(const semo_process* process) { return process ? process->process.iteration() : 0; }

uint64_t semo_process_evaluations(const semo_process* process)
{
    return process ? process->process.evaluations() : 0;
}

size_t semo_process_size(const semo_process* process) { return process ? process->process.size() : 0; }

semo_status semo_process_member(const semo_process* process, size_t index, char* buffer, size_t buffer_size)
{
    return guarded([&] {
        require(process && buffer, "null argument");
        const auto& p = process->process;
        require(index < p.size(), "member index out of range");
        const auto text = p.is_cached() ? p.cached().members()[index].genome.to_string()
                                        : p.reeval().members()[index].to_string();
        require(buffer_size > text.size(), "buffer too small");
        text.copy(buffer, text.size());
        buffer[text.size()] = '\0';
    });
}

semo_status semo_process_stored_value(const semo_process* process, size_t index, int64_t* out)
{
    return guarded([&] {
        require(process && out, "null argument");
        const auto& pop = process->process.cached();
        require(index < pop.size(), "member index out of range");
        *out = pop.members()[index].stored_value[0];
    });
}

int semo_process_covered(const semo_process* process)
{
    return process && semo::pareto_covered(process->process) ? 1 : 0;
}

} // extern "C"
