#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "inoue/config.hpp"
#include "inoue/pipeline.hpp"

using namespace inoue;
namespace fs = std::filesystem;

namespace {

bool has_path(const Validation& v, const std::string& path, ErrorCode code = ErrorCode::schema_violation)
{
    for (const auto& x : v.violations)
        if (x.path == path && x.code == code) return true;
    return false;
}

fs::path scratch(const std::string& name)
{
    fs::path p = fs::temp_directory_path() / ("inoue_unit_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("minimal S_M flow config is valid")
{
    const Validation v = validate_config("[run]\nstages = flow\n[flow]\nt_end = 1\n");
    REQUIRE(v.ok());
    CHECK(v.config->has(Stage::construct));
    CHECK(v.config->has(Stage::flow));
    CHECK(!v.config->has(Stage::gh));
}

TEST_CASE("gh without flow is a dependency violation")
{
    const Validation v = validate_config("[run]\nstages = construct, gh\n");
    CHECK(!v.ok());
    CHECK(has_path(v, "run.stages"));
}

TEST_CASE("r = 0 surfaces as ZeroR")
{
    const Validation v = validate_config("[surface]\nkind = splus\nn = 1 1, 1 2\nr = 0\n");
    CHECK(!v.ok());
    CHECK(has_path(v, "surface", ErrorCode::zero_r));
    CHECK(v.code() == ErrorCode::zero_r);
}

TEST_CASE("all violations are collected")
{
    const Validation v = validate_config("[run]\nworkers = 0\nbogus = 1\n[flow]\nt_end = x\nsolver = sideways\n"
                                         "[gh]\ntimes = 3, 1\n");
    CHECK(has_path(v, "run.workers"));
    CHECK(has_path(v, "run.bogus"));
    CHECK(has_path(v, "flow.t_end"));
    CHECK(has_path(v, "flow.solver"));
    CHECK(has_path(v, "gh.times"));
}

TEST_CASE("initial data must be invariant and fit the solver")
{
    CHECK(has_path(validate_config("[flow]\ninitial = 0.1*cos(u)\n"), "flow.initial", ErrorCode::invalid_initial_data));
    CHECK(has_path(validate_config("[flow]\ninitial = wave(1,0,0)\n"), "flow.initial", ErrorCode::invalid_initial_data));
    CHECK(validate_config("[flow]\nsolver = full\ninitial = 0.002*wave(1,0,0)\n").ok());
    CHECK(has_path(validate_config("[surface]\nkind = splus\n[flow]\nsolver = full\n"), "flow.solver"));
}

TEST_CASE("surface file references")
{
    const fs::path dir = scratch("surface_file");
    std::ofstream(dir / "s.ini") << "[surface]\nkind = sm\nmatrix = 0 0 1, 1 0 0, 0 1 5\n";
    const Validation v = validate_config("[surface]\nfile = s.ini\n", dir.string());
    REQUIRE(v.ok());
    CHECK(v.config->surface.matrix[2][2] == 5);
    CHECK(has_path(validate_config("[surface]\nfile = missing.ini\n", dir.string()), "surface.file"));
}

TEST_CASE("hash ignores workers and output directory, follows overrides")
{
    const auto a = validate_config("[run]\nworkers = 1\nout = a\n");
    const auto b = validate_config("[run]\nworkers = 4\nout = b\n");
    const auto c = validate_config("[run]\nworkers = 1\n", ".", {"flow.t_end=7"});
    REQUIRE(a.ok());
    REQUIRE(b.ok());
    REQUIRE(c.ok());
    CHECK(a.config->hash() == b.config->hash());
    CHECK(a.config->hash() != c.config->hash());
    CHECK(c.config->flow.t_end == 7);
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("verification-only run writes no flow files")
{
    const fs::path dir = scratch("verify_only");
    const auto v = validate_config("[run]\nstages = verify-tensors\n[verify]\npoints = 10\nresidual_points = 5\n");
    REQUIRE(v.ok());
    const RunManifest m = execute(*v.config, dir.string());
    CHECK(m.passed);
    CHECK(fs::exists(dir / "verify.json"));
    CHECK(fs::exists(dir / "manifest.json"));
    CHECK(!fs::exists(dir / "snapshots.csv"));
    CHECK(!fs::exists(dir / "flow.json"));
    for (const auto& f : m.files) CHECK(f.sha256.size() == 64);
}

TEST_CASE("plot data from an empty run directory is MissingSeries")
{
    const fs::path dir = scratch("empty");
    bool thrown = false;
    try {
        emit_plot_data(dir.string());
    } catch (const Error& e) {
        thrown = e.code() == ErrorCode::missing_series;
    }
    CHECK(thrown);
}

TEST_CASE("stage errors are recorded and dependants skipped")
{
    const fs::path dir = scratch("stage_error");
    // invariant but not admissible: omega~ + i ddbar rho is not positive
    const auto v = validate_config("[run]\nstages = flow, diagnose\n[flow]\nn = 64\nt_end = 1\n"
                                   "initial = 0.5*cos(16*pi*u/L)\n");
    REQUIRE(v.ok());
    const RunManifest m = execute(*v.config, dir.string());
    CHECK(!m.passed);
    REQUIRE(m.stages.size() == 3);
    CHECK(m.stages[1].code == ErrorCode::invalid_initial_data);
    CHECK(m.stages[2].status == "skipped");
}
