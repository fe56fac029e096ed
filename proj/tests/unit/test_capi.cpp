// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "semo/semo.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

semo_config* config_with(std::initializer_list<std::pair<const char*, const char*>> entries)
{
    semo_config* c = nullptr;
    REQUIRE(semo_config_create(&c) == SEMO_OK);
    for (const auto& [k, v] : entries) {
        REQUIRE(semo_config_set(c, k, v) == SEMO_OK);
    }
    return c;
}

const std::string kTmp = SEMO_TEST_TMP;

} // namespace

TEST_CASE("config errors map to usage status with a message")
{
    semo_config* c = nullptr;
    REQUIRE(semo_config_create(&c) == SEMO_OK);
    CHECK(semo_config_set(c, "colour", "blue") == SEMO_ERROR_USAGE);
    CHECK(std::string(semo_last_error()).find("colour") != std::string::npos);
    CHECK(semo_config_get(c, "n") == nullptr);
    CHECK(semo_config_set(c, "n", "8") == SEMO_OK);
    CHECK(std::string(semo_config_get(c, "n")) == "8");
    CHECK(semo_config_load_file(c, "/nonexistent/x.cfg") == SEMO_ERROR_IO);
    CHECK(semo_config_set(nullptr, "n", "8") == SEMO_ERROR_USAGE);
    semo_config_destroy(c);
    CHECK(std::string(semo_version()).size() > 0);
}

TEST_CASE("single run through the C interface")
{
    auto* c = config_with({{"n", "8"}, {"p", "0"}, {"variant", "cached"}, {"seed", "1"}});
    semo_result* r = nullptr;
    REQUIRE(semo_run(c, &r) == SEMO_OK);
    REQUIRE(semo_result_record_count(r) == 1);
    semo_record rec{};
    REQUIRE(semo_result_record(r, 0, &rec) == SEMO_OK);
    CHECK(rec.n == 8);
    CHECK(rec.t_total_censored == 0);
    CHECK(rec.final_size == 9);
    CHECK(rec.variant == SEMO_VARIANT_CACHED);
    CHECK(semo_result_record(r, 1, &rec) == SEMO_ERROR_USAGE);

    semo_cell_summary s{};
    REQUIRE(semo_result_cell(r, 0, &s) == SEMO_OK);
    CHECK(std::string(s.variant) == "cached");
    CHECK(s.has_median == 1);
    CHECK(s.median_t_total == static_cast<double>(rec.t_total));
    semo_result_destroy(r);

    REQUIRE(semo_config_set(c, "n", "8,10") == SEMO_OK);
    CHECK(semo_run(c, &r) == SEMO_ERROR_USAGE);
    REQUIRE(semo_config_set(c, "n", "8") == SEMO_OK);
    REQUIRE(semo_config_set(c, "p", "1/z") == SEMO_OK);
    CHECK(semo_run(c, &r) == SEMO_ERROR_USAGE);
    CHECK(std::string(semo_last_error()).find("position 2") != std::string::npos);
    semo_config_destroy(c);
}

TEST_CASE("sweep, files and fit")
{
    auto* c = config_with({{"n", "6,8,10"}, {"p", "0"}, {"variant", "cached,reeval"}, {"trials", "5"}, {"trace", "full"}});
    semo_result* r = nullptr;
    REQUIRE(semo_sweep(c, &r) == SEMO_OK);
    CHECK(semo_result_cell_count(r) == 6);
    CHECK(semo_result_record_count(r) == 30);

    const auto csv = kTmp + "/capi_records.csv";
    REQUIRE(semo_result_write_records(r, csv.c_str(), SEMO_FORMAT_CSV) == SEMO_OK);
    REQUIRE(semo_result_write_records(r, (kTmp + "/capi_records.json").c_str(), SEMO_FORMAT_JSON) == SEMO_OK);
    REQUIRE(semo_result_write_summary(r, (kTmp + "/capi_summary.json").c_str()) == SEMO_OK);
    REQUIRE(semo_result_write_trace(r, (kTmp + "/capi_trace.csv").c_str()) == SEMO_OK);
    CHECK(slurp(kTmp + "/capi_summary.json").find("\"schema_version\": 1") != std::string::npos);
    CHECK(semo_result_write_records(r, "/nonexistent/dir/x.csv", SEMO_FORMAT_CSV) == SEMO_ERROR_IO);

    semo_fit* f = nullptr;
    REQUIRE(semo_fit_records_file(csv.c_str(), &f) == SEMO_OK);
    REQUIRE(semo_fit_count(f) == 2);
    semo_fit_entry e{};
    REQUIRE(semo_fit_get(f, 0, &e) == SEMO_OK);
    CHECK(e.points == 3);
    CHECK(e.exponent > 0);
    REQUIRE(semo_fit_write_json(f, (kTmp + "/capi_fit.json").c_str()) == SEMO_OK);
    semo_fit_destroy(f);
    CHECK(semo_fit_records_file("/nonexistent/records.csv", &f) == SEMO_ERROR_IO);

    semo_result_destroy(r);
    semo_config_destroy(c);
}

TEST_CASE("stepwise process handle")
{
    semo_process* p = nullptr;
    REQUIRE(semo_process_create(6, 0.0, SEMO_VARIANT_CACHED, 0, 3, &p) == SEMO_OK);
    CHECK(semo_process_size(p) == 1);
    CHECK(semo_process_evaluations(p) == 1);
    REQUIRE(semo_process_step(p, 2000) == SEMO_OK);
    CHECK(semo_process_iteration(p) == 2000);
    CHECK(semo_process_covered(p) == 1);
    char buffer[7];
    REQUIRE(semo_process_member(p, 0, buffer, sizeof buffer) == SEMO_OK);
    CHECK(std::string(buffer).size() == 6);
    CHECK(semo_process_member(p, 0, buffer, 6) == SEMO_ERROR_USAGE);
    int64_t stored = -1;
    REQUIRE(semo_process_stored_value(p, 0, &stored) == SEMO_OK);
    CHECK(stored >= 0);
    semo_process_destroy(p);

    REQUIRE(semo_process_create(6, 0.1, SEMO_VARIANT_KEEP, SEMO_KEEP_UNBOUNDED, 3, &p) == SEMO_OK);
    REQUIRE(semo_process_step(p, 10) == SEMO_OK);
    CHECK(semo_process_stored_value(p, 0, &stored) == SEMO_ERROR_USAGE);
    semo_process_destroy(p);

    CHECK(semo_process_create(0, 0.1, SEMO_VARIANT_REEVAL, 0, 3, &p) == SEMO_ERROR_USAGE);
    CHECK(semo_process_create(5, 1.5, SEMO_VARIANT_REEVAL, 0, 3, &p) == SEMO_ERROR_USAGE);
}

TEST_CASE("quick validation passes")
{
    semo_validation* v = nullptr;
    REQUIRE(semo_validate(1, 1, &v) == SEMO_OK);
    CHECK(semo_validation_passed(v) == 1);
    REQUIRE(semo_validation_check_count(v) >= 9);
    for (size_t i = 0; i < semo_validation_check_count(v); ++i) {
        semo_check check{};
        REQUIRE(semo_validation_check(v, i, &check) == SEMO_OK);
        CAPTURE(check.name);
        CHECK(check.violations == 0);
    }
    semo_validation_destroy(v);
}
