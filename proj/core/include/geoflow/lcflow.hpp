#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "geoflow/grid.hpp"
#include "geoflow/hmflow.hpp"

namespace geoflow::lcflow {

using hmflow::SolverConfig;
using hmflow::SolveStatus;

/// Velocity (n components) and director (3 components) on a shared ladder.
struct LCState {
    SpaceTimeField u;
    SpaceTimeField d;
};

struct LCSolveResult {
    LCState state;
    /// ||u^(k+1) - u^(k)||_Z + |||d^(k+1) - d^(k)|||_X.
    std::vector<double> increments;
    std::vector<double> contraction_estimates;
    double residual_u = 0.0;
    double residual_d = 0.0;
    /// sup_j || |d(t_j)| - 1 ||_inf.
    double constraint_defect = 0.0;
    /// sup_j of the spectral divergence of u(t_j).
    double divergence_defect = 0.0;
    bool converged = false;
    SolveStatus status = SolveStatus::no_convergence;
    std::string message;
};

/// u0~ - V[u (x) u + grad d (x) grad d]; slice 0 is u0.
SpaceTimeField t1_map(const LCState& state, const Field& u0);

/// d0~ + S[A(d)(grad d, grad d) - u . grad d]; slice 0 is d0. Throws TubeEscape.
SpaceTimeField t2_map(const LCState& state, const Field& d0);

/// Both maps evaluated on the same input state.
LCState lc_map(const LCState& state, const Field& u0, const Field& d0);

/// Picard iteration of (T1, T2) from (u0~, d0~). Requires n in {2, 3},
/// div u0 = 0 and |d0| = 1 to 1e-12 (std::invalid_argument otherwise).
LCSolveResult solve_lc(const Field& u0, const Field& d0, const SolverConfig& cfg);

/// Velocity residual d_t u - Lap u + P div(u (x) u + grad d (x) grad d) and
/// director residual d_t d - Lap d + u . grad d - A(d)(grad d, grad d), centered
/// d_t, interior slices only (end slices zero).
LCState lc_residual(const LCState& state);

/// sup over slices of |div u|.
double divergence_defect(const SpaceTimeField& u);

struct LCSweepRow {
    double alpha = 0.0;
    double data_size = 0.0;  ///< ||u0||_{BMO^-1} + [d0]_BMO
    bool converged = false;
    SolveStatus status = SolveStatus::no_convergence;
    int iterations = 0;
    double theta = 0.0;
    double solution_size = 0.0;  ///< ||u||_Z + ||d||_X
    double c_ratio = 0.0;
    double constraint_defect = 0.0;
};

struct LCSweepReport {
    std::vector<LCSweepRow> rows;
    double threshold = 0.0;
    bool theta_monotone = true;
};

/// `family(alpha)` returns (u0, d0).
LCSweepReport lc_sweep(const std::function<std::pair<Field, Field>(double)>& family,
                       std::span<const double> alphas, const SolverConfig& cfg);

}  // namespace geoflow::lcflow
