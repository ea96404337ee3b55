#pragma once

#include <span>
#include <vector>

#include "geoflow/grid.hpp"
#include "geoflow/spectral.hpp"

namespace geoflow::heat {

/// One step of the first-order exponential integrator on a fixed grid:
///   w <- exp(dt * Lap) w + phi1(dt * Lap) dt f,
/// with per-mode weights (1 - exp(-|xi|^2 dt)) / |xi|^2 (dt on the zero mode).
/// The forcing is held constant over the step, so constant-in-time forcing is
/// integrated exactly.
class ExponentialStep {
public:
    ExponentialStep(const GridSpec& grid, double dt);

    double dt() const { return dt_; }
    void propagate(spectral::Spectrum& w) const;
    void advance(spectral::Spectrum& w, const spectral::Spectrum& forcing) const;

private:
    GridSpec grid_;
    double dt_;
    std::vector<double> decay_;
    std::vector<double> weight_;
};

/// exp(t * Lap) f; throws std::invalid_argument for t < 0.
Field heat_semigroup(const Field& f, double t);
spectral::Spectrum heat_semigroup(const spectral::Spectrum& f, double t);

/// Slice j is heat_semigroup(u0, t_j).
SpaceTimeField caloric_extension(const Field& u0, const TimeLadder& ladder);

/// S f(t) = int_0^t exp((t - s) Lap) f(s) ds with f held at its right-endpoint
/// value f(t_j) on each step (t_{j-1}, t_j]. f(t_0) is never read.
SpaceTimeField duhamel_S(const SpaceTimeField& f);

/// Same quadrature on spectra. `forcing[j]` is the forcing at t_j for
/// j = 1..m; entry 0 is ignored. Returns the coefficients of S f at every slice.
std::vector<spectral::Spectrum> duhamel_S(std::span<const spectral::Spectrum> forcing,
                                          const TimeLadder& ladder);

/// Leray projection with multiplier delta_ab - xi_a xi_b / |xi|^2 built from the
/// discrete derivative symbol, so the spectral divergence of the output vanishes
/// identically. Modes whose derivative symbol is zero pass through. In 1-D only
/// the mean survives.
Field leray_project(const Field& f);
spectral::Spectrum leray_project(const spectral::Spectrum& f);

/// V f(t) = int_0^t exp((t - s) Lap) P div f(s) ds for an n x n tensor field,
/// same right-endpoint quadrature as duhamel_S. Requires n >= 2.
SpaceTimeField duhamel_V(const SpaceTimeField& f);
std::vector<spectral::Spectrum> duhamel_V(std::span<const spectral::Spectrum> forcing,
                                          const TimeLadder& ladder);

/// Mean-zero P solving -Lap P = div(u . grad u + div(grad d (x) grad d)).
Field recover_pressure(const Field& u, const Field& d);

}  // namespace geoflow::heat
