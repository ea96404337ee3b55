#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "geoflow/grid.hpp"

namespace geoflow::norms {

/// Closed ball in torus distance: a site belongs iff its wrapped offset o from
/// the center satisfies |o|^2 h^2 <= r^2.
struct BallSpec {
    std::size_t center = 0;
    double radius = 0.0;
};

/// B_R(x) x [0, t_k], where t_k is R^2 rounded up to the ladder.
struct ParabolicCylinder {
    std::size_t center = 0;
    double radius = 0.0;
    int last_slice = 0;
};

/// Ladder slice attaining a sup over 0 < t <= T.
struct SliceIndex {
    int slice = 0;
    double time = 0.0;
};

using Maximizer = std::variant<std::monostate, BallSpec, ParabolicCylinder, SliceIndex>;

struct NormTerm {
    std::string name;
    double value = 0.0;
    Maximizer where;
};

/// Value of a functional, its sup terms, and where the principal sup is attained.
struct NormReport {
    double value = 0.0;
    std::vector<NormTerm> terms;
    Maximizer maximizer;

    const NormTerm& term(std::string_view name) const;
};

/// {r_max, r_max/2, ...} down to the last radius >= 2h, returned ascending.
/// Always contains r_max.
std::vector<double> dyadic_radii(double r_max, double spacing);

/// Integer offsets of the ball of radius r, in lexicographic order.
std::vector<std::array<int, 3>> ball_stencil(const GridSpec& grid, double radius);

/// r^-n h^n sum_{B_r(x)} |f - f_{x,r}|, with the literal r^-n weight.
double ball_oscillation(const Field& f, const BallSpec& ball);
/// |B_r|^-1 sum_{B_r(x)} |f - f_{x,r}| using the discrete ball measure.
double ball_mean_oscillation(const Field& f, const BallSpec& ball);

/// r^-n int_{P_r} density, trapezoid in t over slices 0..last_slice and h^n per
/// site. `density` must be scalar.
double cylinder_average(const SpaceTimeField& density, const ParabolicCylinder& cylinder);

/// |grad f|^2 (sum over every derivative and component) per slice.
SpaceTimeField gradient_density(const SpaceTimeField& f);
/// |f|^power per slice, power 1 or 2.
SpaceTimeField magnitude_density(const SpaceTimeField& f, int power);

/// [f]_{BMO_R}: sup over grid centers and dyadic radii <= R, 0 < R <= L/4.
/// Terms: "oscillation" (r^-n weight, equals value) and "mean_oscillation"
/// (|B_r|^-1 weight, reported separately with its own maximizer).
NormReport bmo_seminorm(const Field& f, double R);

/// (r, [f]_{BMO_r}) for dyadic r from the smallest admissible radius up to L/4.
std::vector<std::pair<double, double>> vmo_profile(const Field& f);

/// sup_{x, r <= R} (r^-n int_{P_r} |grad u0~|^2)^{1/2} with u0~ the caloric
/// extension on `ladder`. Needs R <= L/4 and R^2 <= T.
NormReport carleson_bmo(const Field& u0, double R, const TimeLadder& ladder);

/// sup_{x, r <= R} (r^-n int_{P_r} |u0~|^2)^{1/2}.
NormReport bmo_inv_norm(const Field& u0, double R, const TimeLadder& ladder);

/// value = |||f|||_X = sup_linf + (sup_sqrt_t_grad + carleson_grad).
NormReport x_norm(const SpaceTimeField& f);
/// ||f||_X = sup_sqrt_t_grad + carleson_grad, read from an x_norm report.
double x_seminorm(const NormReport& x_report);

/// value = sup_t_linf + carleson_l1.
NormReport y_norm(const SpaceTimeField& f);

/// value = sup_sqrt_t_linf + carleson_l2.
NormReport z_norm(const SpaceTimeField& f);

/// Largest admissible cylinder radius for space-time norms: min(sqrt(T), L/4).
double max_cylinder_radius(const GridSpec& grid, const TimeLadder& ladder);

}  // namespace geoflow::norms
