#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "geoflow/grid.hpp"
#include "geoflow/sphere.hpp"
#include "geoflow/spectral.hpp"

namespace geoflow::hmflow {

struct SolverConfig {
    GridSpec grid;
    TimeLadder ladder;
    double picard_tol = 1e-10;  ///< measured in |||.|||_X
    int max_iters = 60;
    double constraint_tol = 1e-6;

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

enum class SolveStatus { converged, no_convergence, tube_escape };

const char* to_string(SolveStatus status);

struct SolveResult {
    SpaceTimeField solution;
    /// |||u^(k+1) - u^(k)|||_X for every applied map.
    std::vector<double> increments;
    /// increments[k + 1] / increments[k].
    std::vector<double> contraction_estimates;
    /// sup over interior slices of |(d_t - Lap) u - A(u)(grad u, grad u)|.
    double residual_norm = 0.0;
    /// sup_j || |u(t_j)| - 1 ||_inf, no renormalization applied.
    double constraint_defect = 0.0;
    bool converged = false;
    SolveStatus status = SolveStatus::no_convergence;
    std::string message;
};

/// Dealiased forcing A(u)(grad u, grad u) - (v . grad) u for one slice, with
/// v omitted when `velocity` is null. Throws sphere::TubeEscape.
spectral::Spectrum director_forcing(const sphere::SphereTarget& target, const spectral::Spectrum& u,
                                    const spectral::Spectrum* velocity = nullptr);

/// T u = u0~ + S(A(u)(grad u, grad u)); slice 0 is u0.
SpaceTimeField picard_map(const SpaceTimeField& u, const Field& u0);

/// Picard iteration from u0~ until the X-increment drops below picard_tol.
/// Large data ends in no_convergence or tube_escape; both are reported, not thrown.
/// Throws std::invalid_argument if u0 is not sphere-valued to 1e-12.
SolveResult solve_hmf(const Field& u0, const SolverConfig& cfg);

/// Step-by-step exponential integrator with the forcing frozen at the left end
/// of each step; no renormalization. Independent cross-check of solve_hmf.
SpaceTimeField time_march_oracle(const Field& u0, const SolverConfig& cfg);

/// (d_t - Lap) u - A(u)(grad u, grad u) with centered d_t; slices 0 and m are zero.
SpaceTimeField pde_residual(const SpaceTimeField& u);

/// Largest ratio among contraction estimates whose denominator sits above
/// `floor`; zero when none qualify.
double measured_contraction(const std::vector<double>& increments, double floor);

struct SweepRow {
    double alpha = 0.0;
    double data_bmo = 0.0;
    bool converged = false;
    SolveStatus status = SolveStatus::no_convergence;
    int iterations = 0;
    double theta = 0.0;
    double solution_x = 0.0;
    /// ||u||_X / [u0]_BMO, zero when the data is constant.
    double c_ratio = 0.0;
    /// |||u(alpha) - u(alpha_prev)|||_X / |alpha - alpha_prev| against the
    /// previous converged row; zero for the first.
    double lipschitz = 0.0;
    double constraint_defect = 0.0;
};

struct SweepReport {
    std::vector<SweepRow> rows;
    /// Largest alpha such that every alpha' <= alpha converged.
    double threshold = 0.0;
    bool theta_monotone = true;
};

/// Solves for every alpha (ascending) with u0 = family(alpha).
SweepReport wellposedness_sweep(const std::function<Field(double)>& family, std::span<const double> alphas,
                                 const SolverConfig& cfg);

}  // namespace geoflow::hmflow
