#include "geoflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace geoflow {

namespace {

bool is_power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

int wrap(int i, int m) {
    const int r = i % m;
    return r < 0 ? r + m : r;
}

}  // namespace

GridSpec::GridSpec(int dim, int points_per_axis, double period)
    : dim_(dim), points_(points_per_axis), period_(period), sites_(1) {
    if (dim < 1 || dim > 3) {
        throw std::invalid_argument("grid dimension must be 1, 2 or 3, got " + std::to_string(dim));
    }
    if (points_per_axis < 8 || !is_power_of_two(points_per_axis)) {
        throw std::invalid_argument("points per axis must be a power of two >= 8, got " +
                                    std::to_string(points_per_axis));
    }
    if (!(period > 0.0) || !std::isfinite(period)) {
        throw std::invalid_argument("grid period must be positive and finite");
    }
    for (int d = 0; d < dim; ++d) sites_ *= static_cast<std::size_t>(points_per_axis);
}

std::array<int, 3> GridSpec::coords(std::size_t site) const {
    std::array<int, 3> c{0, 0, 0};
    for (int d = dim_ - 1; d >= 0; --d) {
        c[d] = static_cast<int>(site % points_);
        site /= points_;
    }
    return c;
}

std::size_t GridSpec::site(std::array<int, 3> c) const {
    std::size_t s = 0;
    for (int d = 0; d < dim_; ++d) s = s * points_ + static_cast<std::size_t>(wrap(c[d], points_));
    return s;
}

std::array<double, 3> GridSpec::position(std::size_t site) const {
    const auto c = coords(site);
    const double h = spacing();
    return {c[0] * h, c[1] * h, c[2] * h};
}

Field::Field(GridSpec grid, int components)
    : grid_(grid), components_(components), values_(grid.sites() * std::max(components, 0), 0.0) {
    if (components < 1) throw std::invalid_argument("field needs at least one component");
}

Field::Field(GridSpec grid, int components, std::vector<double> values)
    : grid_(grid), components_(components), values_(std::move(values)) {
    if (components < 1) throw std::invalid_argument("field needs at least one component");
    if (values_.size() != grid_.sites() * static_cast<std::size_t>(components)) {
        throw std::invalid_argument("field value count does not match sites * components");
    }
    if (!all_finite()) throw std::domain_error("field values must be finite");
}

Field Field::from_function(
    const GridSpec& grid, int components,
    const std::function<void(std::span<const double>, std::span<double>)>& fn) {
    Field f(grid, components);
    for (std::size_t s = 0; s < grid.sites(); ++s) {
        const auto x = grid.position(s);
        fn(std::span<const double>(x.data(), grid.dim()), f.at(s));
    }
    if (!f.all_finite()) throw std::domain_error("field function produced non-finite values");
    return f;
}

double Field::sup_norm() const {
    double best = 0.0;
    for (std::size_t s = 0; s < sites(); ++s) {
        double sq = 0.0;
        for (double v : at(s)) sq += v * v;
        best = std::max(best, sq);
    }
    return std::sqrt(best);
}

double Field::mean(int a) const {
    double sum = 0.0;
    for (std::size_t s = 0; s < sites(); ++s) sum += (*this)(s, a);
    return sum / static_cast<double>(sites());
}

bool Field::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Field Field::component(int a) const {
    Field out(grid_, 1);
    for (std::size_t s = 0; s < sites(); ++s) out(s, 0) = (*this)(s, a);
    return out;
}

Field Field::shifted(std::array<int, 3> offset) const {
    Field out(grid_, components_);
    for (std::size_t s = 0; s < sites(); ++s) {
        auto c = grid_.coords(s);
        for (int d = 0; d < grid_.dim(); ++d) c[d] += offset[d];
        const auto src = at(s);
        std::copy(src.begin(), src.end(), out.at(grid_.site(c)).begin());
    }
    return out;
}

TimeLadder::TimeLadder(double t_final, int steps) : t_final_(t_final), steps_(steps) {
    if (!(t_final > 0.0) || !std::isfinite(t_final)) {
        throw std::invalid_argument("final time must be positive and finite");
    }
    if (steps < 4) throw std::invalid_argument("time ladder needs at least 4 steps");
}

int TimeLadder::slice_at_or_after(double t) const {
    if (t <= 0.0) return 0;
    if (t >= t_final_) return steps_;
    // Tolerate representation error so that t = k * dt maps to k.
    const double q = t / dt();
    const double k = std::ceil(q - 1e-9 * std::max(1.0, q));
    return std::clamp(static_cast<int>(k), 0, steps_);
}

SpaceTimeField::SpaceTimeField(const GridSpec& grid, int components, TimeLadder ladder)
    : ladder_(ladder), slices_(static_cast<std::size_t>(ladder.steps() + 1), Field(grid, components)) {}

SpaceTimeField::SpaceTimeField(TimeLadder ladder, std::vector<Field> slices)
    : ladder_(ladder), slices_(std::move(slices)) {
    if (slices_.size() != static_cast<std::size_t>(ladder_.steps() + 1)) {
        throw std::invalid_argument("space-time field needs steps + 1 slices");
    }
    for (const auto& s : slices_) {
        if (!(s.grid() == slices_.front().grid()) || s.components() != slices_.front().components()) {
            throw std::invalid_argument("space-time slices must share grid and component count");
        }
    }
}

double SpaceTimeField::sup_norm() const {
    double best = 0.0;
    for (const auto& s : slices_) best = std::max(best, s.sup_norm());
    return best;
}

}  // namespace geoflow
