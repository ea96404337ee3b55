#include "geoflow/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "geoflow/spectral.hpp"

namespace geoflow::sphere {

namespace {

double norm_of(std::span<const double> y) {
    double sq = 0.0;
    for (double v : y) sq += v * v;
    return std::sqrt(sq);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

}  // namespace

TubeEscape::TubeEscape(double norm)
    : std::runtime_error("point left the projection tube (|y| = " + std::to_string(norm) + " < 1/4)"),
      norm_(norm) {}

SphereTarget::SphereTarget(int ambient_dim, double tube_radius)
    : ambient_dim_(ambient_dim), tube_radius_(tube_radius) {
    if (ambient_dim < 2) throw std::invalid_argument("sphere target needs ambient dimension >= 2");
    if (!(tube_radius > 0.0 && tube_radius <= 0.5)) {
        throw std::invalid_argument("tube radius must lie in (0, 1/2]");
    }
}

void SphereTarget::check_dim(std::span<const double> y) const {
    if (static_cast<int>(y.size()) != ambient_dim_) {
        throw std::invalid_argument("point has wrong ambient dimension");
    }
}

bool SphereTarget::in_tube(std::span<const double> y) const {
    check_dim(y);
    return std::abs(norm_of(y) - 1.0) <= tube_radius_;
}

void SphereTarget::project(std::span<const double> y, std::span<double> out) const {
    check_dim(y);
    const double r = norm_of(y);
    if (!(r >= kEscapeRadius)) throw TubeEscape(r);
    // Points on the sphere to rounding are returned as is, which makes the
    // projection idempotent bit for bit.
    if (std::abs(r - 1.0) <= 4.0 * std::numeric_limits<double>::epsilon()) {
        std::copy(y.begin(), y.end(), out.begin());
        return;
    }
    for (int a = 0; a < ambient_dim_; ++a) out[a] = y[a] / r;
}

std::vector<double> SphereTarget::project(std::span<const double> y) const {
    std::vector<double> out(y.size());
    project(y, out);
    return out;
}

std::vector<double> SphereTarget::defect(std::span<const double> y) const {
    auto p = project(y);
    for (int a = 0; a < ambient_dim_; ++a) p[a] = y[a] - p[a];
    return p;
}

double SphereTarget::rho(std::span<const double> y) const {
    check_dim(y);
    const double r = norm_of(y);
    if (!(r >= kEscapeRadius)) throw TubeEscape(r);
    return 0.5 * (r - 1.0) * (r - 1.0);
}

void SphereTarget::second_fundamental_form(std::span<const double> y, std::span<const double> v,
                                           std::span<const double> w, std::span<double> out) const {
    check_dim(y);
    const double r = norm_of(y);
    if (!(r >= kEscapeRadius)) throw TubeEscape(r);
    const double r3 = r * r * r;
    const double r5 = r3 * r * r;
    const double yv = dot(y, v);
    const double yw = dot(y, w);
    const double vw = dot(v, w);
    // out = -D^2 Pi_a(v, w)
    for (int a = 0; a < ambient_dim_; ++a) {
        out[a] = (v[a] * yw + w[a] * yv + vw * y[a]) / r3 - 3.0 * y[a] * yv * yw / r5;
    }
}

void SphereTarget::second_fundamental_form(std::span<const double> y, std::span<const double> stack,
                                           int columns, std::span<double> out) const {
    check_dim(y);
    const int l = ambient_dim_;
    const double r = norm_of(y);
    if (!(r >= kEscapeRadius)) throw TubeEscape(r);
    const double r3 = r * r * r;
    const double r5 = r3 * r * r;
    std::fill(out.begin(), out.begin() + l, 0.0);
    for (int i = 0; i < columns; ++i) {
        const auto v = stack.subspan(static_cast<std::size_t>(i) * l, l);
        const double yv = dot(y, v);
        const double vv = dot(v, v);
        for (int a = 0; a < l; ++a) out[a] += (2.0 * v[a] * yv + vv * y[a]) / r3 - 3.0 * y[a] * yv * yv / r5;
    }
}

Field apply_sff_field(const SphereTarget& target, const Field& u, const Field& grad_u) {
    const int l = u.components();
    const int n = u.grid().dim();
    if (l != target.ambient_dim()) throw std::invalid_argument("field width differs from target dimension");
    if (grad_u.components() != l * n) throw std::invalid_argument("gradient stack has wrong width");
    Field out(u.grid(), l);
    for (std::size_t s = 0; s < u.sites(); ++s) {
        target.second_fundamental_form(u.at(s), grad_u.at(s), n, out.at(s));
    }
    return out;
}

SpaceTimeField subharmonicity_residual(const SphereTarget& target, const SpaceTimeField& u) {
    const int m = u.steps();
    const double dt = u.ladder().dt();
    const GridSpec& grid = u.grid();
    std::vector<Field> rho_slices;
    std::vector<Field> defect_energy;
    rho_slices.reserve(m + 1);
    defect_energy.reserve(m + 1);
    for (const auto& slice : u.slices()) {
        Field rho(grid, 1);
        Field q(grid, slice.components());
        for (std::size_t s = 0; s < slice.sites(); ++s) {
            rho(s, 0) = target.rho(slice.at(s));
            const auto d = target.defect(slice.at(s));
            std::copy(d.begin(), d.end(), q.at(s).begin());
        }
        const Field grad_q = spectral::gradient(q);
        Field energy(grid, 1);
        for (std::size_t s = 0; s < slice.sites(); ++s) {
            double acc = 0.0;
            for (double v : grad_q.at(s)) acc += v * v;
            energy(s, 0) = acc;
        }
        rho_slices.push_back(std::move(rho));
        defect_energy.push_back(std::move(energy));
    }
    std::vector<Field> out;
    out.reserve(m + 1);
    for (int j = 0; j <= m; ++j) {
        const int lo = std::max(0, j - 1);
        const int hi = std::min(m, j + 1);
        const double span = (hi - lo) * dt;
        const Field lap = spectral::laplacian(rho_slices[j]);
        Field r(grid, 1);
        for (std::size_t s = 0; s < grid.sites(); ++s) {
            const double rho_t = (rho_slices[hi](s, 0) - rho_slices[lo](s, 0)) / span;
            r(s, 0) = rho_t - lap(s, 0) + defect_energy[j](s, 0);
        }
        out.push_back(std::move(r));
    }
    return {u.ladder(), std::move(out)};
}

double constraint_defect(const SpaceTimeField& u) {
    double worst = 0.0;
    for (const auto& slice : u.slices()) {
        for (std::size_t s = 0; s < slice.sites(); ++s) worst = std::max(worst, std::abs(norm_of(slice.at(s)) - 1.0));
    }
    return worst;
}

}  // namespace geoflow::sphere
