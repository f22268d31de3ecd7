#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "inoue/calculus.hpp"
#include "inoue/diagnostics.hpp"
#include "inoue/errors.hpp"
#include "inoue/integrator.hpp"
#include "inoue/surface.hpp"

namespace inoue {

// Stage order is fixed; a config lists a subset.
enum class Stage { construct, verify_tensors, flow, diagnose, gh };
constexpr int kStageCount = 5;

std::string stage_name(Stage s);
std::optional<Stage> parse_stage(const std::string& name);

struct SurfaceSpec {
    SurfaceKind kind = SurfaceKind::sm;
    IntMat3 matrix = default_sm_matrix();
    IntMat2 n{{{2, 1}, {1, 1}}};
    long long p = 0, q = 0, r = 1;
    std::optional<cplx> tau;

    Surface build() const;
};

struct VerifyConfig {
    int points = 100;
    std::vector<double> times{0, 1, 5};
    int residual_points = 50;
    std::vector<double> residual_times{0, 1, 3, 6};
    int flat_metrics = 5;
    DiffBackend backend = DiffBackend::automatic;
};

struct FlowConfig {
    SolverKind solver = SolverKind::reduced;
    int n = 256;
    int n_fiber = 12, n_base = 12;
    double t_end = 8;
    double snapshot_every = 0.25;
    // initial potential rho, an expression in u, y2, x1, y1, x2, s1, s2, s3
    std::string initial = "0";
    StepOptions step;
};

struct GhConfig {
    std::vector<double> times{0, 2, 4, 6};
    int fiber_n = 24;
    int quotient_fiber = 12, quotient_base = 12;
    // Dijkstra sources when a graph has more than 12^3 nodes
    int samples = 64;
    int circle_n = 256;
};

struct RunConfig {
    std::vector<Stage> stages;
    std::string out = "inoue_out";
    std::uint64_t seed = 1;
    int workers = 1;
    SurfaceSpec surface;
    VerifyConfig verify;
    FlowConfig flow;
    DiagnoseOptions diagnose;
    GhConfig gh;

    bool has(Stage s) const;
    // sorted key = value lines of every computational setting (out and workers excluded)
    std::string canonical() const;
    // SHA-256 of canonical()
    std::string hash() const;
};

struct Violation {
    std::string path;
    ErrorCode code = ErrorCode::schema_violation;
    std::string message;
};

struct Validation {
    std::optional<RunConfig> config;
    std::vector<Violation> violations;

    bool ok() const { return config.has_value(); }
    // first non-schema code (e.g. ZeroR from the surface), else SchemaViolation
    ErrorCode code() const;
    std::string report() const;
};

// INI text. Relative file references resolve against base_dir. Overrides are
// "section.key=value" strings applied after the text.
Validation validate_config(const std::string& text, const std::string& base_dir = ".",
                           const std::vector<std::string>& overrides = {});
Validation validate_config_file(const std::string& path, const std::vector<std::string>& overrides = {});

std::string sha256_hex(const std::string& bytes);

}  // namespace inoue
