#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "geoflow/grid.hpp"

namespace geoflow::sphere {

/// Raised when a point falls below |y| = 1/4, where y/|y| is no longer the
/// projection the solvers are allowed to use.
class TubeEscape : public std::runtime_error {
public:
    explicit TubeEscape(double norm);
    double norm() const { return norm_; }

private:
    double norm_;
};

inline constexpr double kEscapeRadius = 0.25;

/// Unit sphere S^{l-1} in R^l with a tubular neighbourhood | |y| - 1 | <= tube_radius.
class SphereTarget {
public:
    explicit SphereTarget(int ambient_dim, double tube_radius = 0.5);

    int ambient_dim() const { return ambient_dim_; }
    double tube_radius() const { return tube_radius_; }
    bool in_tube(std::span<const double> y) const;

    /// y / |y|; throws TubeEscape below |y| = 1/4.
    void project(std::span<const double> y, std::span<double> out) const;
    std::vector<double> project(std::span<const double> y) const;

    /// Q(y) = y - Pi(y).
    std::vector<double> defect(std::span<const double> y) const;
    /// rho(y) = |Q(y)|^2 / 2.
    double rho(std::span<const double> y) const;

    /// A(y)(v, w) = -D^2 Pi(y)(v, w), the symmetric bilinear form.
    void second_fundamental_form(std::span<const double> y, std::span<const double> v,
                                 std::span<const double> w, std::span<double> out) const;

    /// sum_i A(y)(V_i, V_i) for a gradient stack V (column i at [i*l, (i+1)*l)).
    void second_fundamental_form(std::span<const double> y, std::span<const double> stack, int columns,
                                 std::span<double> out) const;

private:
    void check_dim(std::span<const double> y) const;

    int ambient_dim_;
    double tube_radius_;
};

/// Pointwise A(u)(grad u, grad u) on the grid (no dealiasing); grad_u in the
/// spectral::gradient layout.
Field apply_sff_field(const SphereTarget& target, const Field& u, const Field& grad_u);

/// (d_t - Lap) rho(u) + |grad Q(u)|^2 per slice. d_t is a centered difference
/// on interior slices and one-sided at the two ends.
SpaceTimeField subharmonicity_residual(const SphereTarget& target, const SpaceTimeField& u);

/// sup over slices and sites of | |u| - 1 |.
double constraint_defect(const SpaceTimeField& u);

}  // namespace geoflow::sphere
