#pragma once

#include <string>

#include "json.hpp"

#include "geoflow/app/config.hpp"

namespace geoflow::app {

enum ExitCode : int { kOk = 0, kError = 1, kNoConvergence = 2 };

/// Runs one experiment and writes its artifacts into config.output. Artifacts
/// are pure functions of the config; timings go to the sidecar run.log only.
int run(const ExperimentConfig& config);

/// Config echo stored in every diagnostics file (the output path is omitted).
nlohmann::json config_json(const ExperimentConfig& config);

/// Column order of the sweep and norms tables.
const std::vector<std::string>& sweep_columns();
const std::vector<std::string>& norms_columns();
const std::vector<std::string>& verify_columns();

}  // namespace geoflow::app
