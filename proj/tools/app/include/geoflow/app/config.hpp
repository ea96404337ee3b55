#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "geoflow/data.hpp"
#include "geoflow/grid.hpp"
#include "geoflow/hmflow.hpp"

namespace geoflow::app {

enum class Kind { extend, norms, solve_hmf, solve_lc, sweep, verify };

const char* to_string(Kind kind);

struct DataSpec {
    std::string family = "angle_modes";
    data::FamilyParams params;
    /// Velocity family for solve-lc and lc sweeps.
    std::string velocity_family = "zero";
};

struct SweepSpec {
    std::string flow = "hmf";  ///< "hmf" or "lc"
    std::vector<double> alphas{0.0, 0.05, 0.1, 0.2};
};

struct ExperimentConfig {
    Kind kind = Kind::verify;
    GridSpec grid{2, 32, 6.283185307179586};
    TimeLadder ladder{0.25, 32};
    DataSpec data;
    double picard_tol = 1e-10;
    int max_iters = 60;
    double constraint_tol = 1e-6;
    SweepSpec sweep;
    /// Ball/cylinder radius for the norms experiment; default max admissible.
    std::optional<double> radius;
    /// Slice indices written as snapshots by extend/solve runs.
    std::vector<int> snapshots;
    std::uint64_t seed = 1;
    std::filesystem::path output = "geoflow-out";

    hmflow::SolverConfig solver() const;
};

Kind parse_kind(const std::string& name);

/// Parses a single JSON document. Unknown keys anywhere are rejected with
/// std::invalid_argument, as are out-of-range values. `kind` supplies the
/// experiment kind when the document has none; a conflicting one is rejected.
ExperimentConfig parse_config(const std::string& json_text, std::optional<Kind> kind = std::nullopt);
ExperimentConfig load_config(const std::filesystem::path& path, std::optional<Kind> kind = std::nullopt);

}  // namespace geoflow::app
