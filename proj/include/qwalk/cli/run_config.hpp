#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "qwalk/core.hpp"
#include "qwalk/ensemble.hpp"
#include "qwalk/near_resonant.hpp"

namespace qwalk::cli {

/// Process exit status of the qwalk tool.
enum class ExitCode : int {
    kOk = 0,
    kConfig = 2,
    kNumeric = 3,
    kComparisonFailed = 4,
};

struct CompareSpec {
    /// Route the primary route is measured against.
    Route reference = Route::kSimulation;
    double tolerance = 1e-10;
    /// Gate pass/fail on the distance outside the initial classes {0, 1}.
    bool exclude_initial = false;
};

struct OutputSpec {
    std::filesystem::path directory{"."};
    bool plot = false;
};

/// Everything one invocation needs. The document format is described in
/// docs/config.md; unknown keys are rejected.
struct RunConfig {
    WalkConfig walk;
    RatchetSpec ratchet;
    /// fwhm = 0 runs a single quasimomentum; route is taken from `route`.
    EnsembleSpec ensemble;
    Route route = Route::kSimulation;
    PathSumMode path_sum = PathSumMode::kAuto;
    CompareSpec compare;
    OutputSpec output;
    /// Worker threads for ensembles and sweeps; 0 uses the hardware count.
    unsigned threads = 0;

    /// Throws ConfigError for values no route can run.
    void validate() const;
    /// Additional checks for running `r` with this config.
    void validate_route(Route r) const;
};

/// Parses a JSON document. Missing keys keep their defaults.
RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Canonical single-line JSON of the config, keys sorted.
std::string to_json_string(const RunConfig& run);

std::string_view to_string(PathSumMode mode);
PathSumMode parse_path_sum_mode(std::string_view text);

}  // namespace qwalk::cli
