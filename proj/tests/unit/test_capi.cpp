#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>

#include "inoue/inoue.h"

TEST_CASE("C API: surfaces")
{
    const long long m[9] = {0, 0, 1, 1, 0, 1, 0, 1, 0};
    inoue_surface* s = nullptr;
    REQUIRE(inoue_surface_sm(m, &s) == INOUE_OK);
    CHECK(inoue_surface_kind(s) == 0);
    CHECK(inoue_surface_period(s) == doctest::Approx(std::log(inoue_surface_scale(s))));
    const double x[4] = {0.1, 0.2, 0.3, 1.1};
    double g[4];
    REQUIRE(inoue_surface_metric(s, "tricerri", 0, x, g) == INOUE_OK);
    CHECK(g[0] == doctest::Approx(1.1));
    CHECK(g[3] == doctest::Approx(1 / 1.21));
    double r = 0;
    REQUIRE(inoue_surface_scalar_curvature(s, "explicit-sm", 0, x, &r) == INOUE_OK);
    CHECK(r == doctest::Approx(-0.25));
    CHECK(inoue_surface_metric(s, "no-such-metric", 0, x, g) != INOUE_OK);
    CHECK(std::strlen(inoue_last_error()) > 0);
    inoue_surface_free(s);

    const long long n[4] = {1, 1, 1, 2};
    inoue_surface* sp = nullptr;
    CHECK(inoue_surface_splus(n, 0, 0, 0, 0, 0, 0, &sp) == INOUE_ZERO_R);
    CHECK(sp == nullptr);
    const long long bad[9] = {1, 0, 0, 0, 2, 0, 0, 0, 1};
    CHECK(inoue_surface_sm(bad, &s) == INOUE_NOT_UNIMODULAR);
    CHECK(std::string(inoue_status_name(INOUE_ZERO_R)) == "ZeroR");
}

TEST_CASE("C API: config violations are listed")
{
    inoue_config* c = nullptr;
    CHECK(inoue_config_parse("[run]\nstages = gh\nworkers = -1\n", ".", &c) == INOUE_SCHEMA_VIOLATION);
    REQUIRE(c != nullptr);
    CHECK(!inoue_config_valid(c));
    CHECK(inoue_config_violation_count(c) == 2);
    char buf[256];
    CHECK(inoue_config_violation(c, 0, buf, sizeof buf) > 0);
    inoue_config_free(c);
}

TEST_CASE("C API: verification run")
{
    const auto dir = std::filesystem::temp_directory_path() / "inoue_unit_capi";
    std::filesystem::remove_all(dir);
    inoue_config* c = nullptr;
    REQUIRE(inoue_config_parse("[verify]\npoints = 8\nresidual_points = 4\n", ".", &c) == INOUE_OK);
    REQUIRE(inoue_config_select_stage(c, "verify-tensors") == INOUE_OK);
    char hash[80];
    CHECK(inoue_config_hash(c, hash, sizeof hash) == 64);
    inoue_run* r = nullptr;
    REQUIRE(inoue_execute(c, dir.string().c_str(), &r) == INOUE_OK);
    CHECK(inoue_run_passed(r));
    std::string m(inoue_run_manifest(r, nullptr, 0), '\0');
    inoue_run_manifest(r, m.data(), m.size() + 1);
    CHECK(m.find("verify.csv") != std::string::npos);
    CHECK(m.find(hash) != std::string::npos);
    CHECK(inoue_emit_plot_data(dir.string().c_str()) == INOUE_MISSING_SERIES);
    inoue_run_free(r);
    inoue_config_free(c);
}
