#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "inoue/config.hpp"

namespace inoue {

const char* tool_version();

struct StageRecord {
    Stage stage = Stage::construct;
    // ok | error | skipped
    std::string status = "skipped";
    double seconds = 0;
    ErrorCode code = ErrorCode::ok;
    std::string message;
};

struct FileRecord {
    // relative to the run directory, '/' separated
    std::string path;
    std::string sha256;
    std::uintmax_t bytes = 0;
};

struct VerdictRecord {
    std::string stage, name;
    bool pass = false;
    bool informational = false;
};

struct RunManifest {
    std::string config_hash;
    std::string version;
    std::string out_dir;
    std::vector<StageRecord> stages;
    std::vector<VerdictRecord> verdicts;
    std::vector<FileRecord> files;
    // every stage ok and every non-informational verdict passed
    bool passed = false;

    std::string json() const;
};

// Runs the configured stages into out_dir and writes manifest.json last.
// Stage errors are recorded; stages depending on a failed one are skipped.
RunManifest execute(const RunConfig& config, const std::string& out_dir);

// Long-format (quantity, t, value, fit_value) table from series/*.csv and gh.csv
// of a run directory, written to plot_data.csv. MissingSeries if neither exists.
std::string emit_plot_data(const std::string& run_dir, const DiagnoseOptions& opt = {});

// %.17g
std::string format_number(double v);

}  // namespace inoue
