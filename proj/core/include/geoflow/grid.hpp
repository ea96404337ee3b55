#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace geoflow {

/// Uniform sampling of the flat torus [0, L)^n with M points per axis.
/// Sites are numbered row-major, axis 0 slowest.
class GridSpec {
public:
    GridSpec(int dim, int points_per_axis, double period);

    int dim() const { return dim_; }
    int points() const { return points_; }
    double period() const { return period_; }
    double spacing() const { return period_ / points_; }
    std::size_t sites() const { return sites_; }

    std::array<int, 3> coords(std::size_t site) const;
    /// Site index of integer coordinates, wrapped periodically.
    std::size_t site(std::array<int, 3> coords) const;
    /// Physical position of a site.
    std::array<double, 3> position(std::size_t site) const;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
    int dim_;
    int points_;
    double period_;
    std::size_t sites_;
};

/// Vector-valued samples on a GridSpec, stored site-major: values[site * l + a].
class Field {
public:
    Field(GridSpec grid, int components);
    /// Throws std::invalid_argument on size mismatch or non-finite entries.
    Field(GridSpec grid, int components, std::vector<double> values);

    static Field from_function(
        const GridSpec& grid, int components,
        const std::function<void(std::span<const double> x, std::span<double> out)>& fn);

    const GridSpec& grid() const { return grid_; }
    int components() const { return components_; }
    std::size_t sites() const { return grid_.sites(); }

    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    double operator()(std::size_t site, int a) const { return values_[site * components_ + a]; }
    double& operator()(std::size_t site, int a) { return values_[site * components_ + a]; }

    std::span<const double> at(std::size_t site) const {
        return {values_.data() + site * components_, static_cast<std::size_t>(components_)};
    }
    std::span<double> at(std::size_t site) {
        return {values_.data() + site * components_, static_cast<std::size_t>(components_)};
    }

    /// max over sites of the Euclidean norm of the value vector.
    double sup_norm() const;
    double mean(int a) const;
    bool all_finite() const;
    Field component(int a) const;

    /// Cyclic shift by integer site offsets along each axis.
    Field shifted(std::array<int, 3> offset) const;

private:
    GridSpec grid_;
    int components_;
    std::vector<double> values_;
};

/// Uniform time ladder t_j = j * T / m_T, j = 0..m_T.
class TimeLadder {
public:
    TimeLadder(double t_final, int steps);

    double t_final() const { return t_final_; }
    int steps() const { return steps_; }
    double dt() const { return t_final_ / steps_; }
    double time(int j) const { return j * dt(); }

    /// Smallest slice index k with t_k >= t (t clamped into [0, T]).
    int slice_at_or_after(double t) const;

    /// Same final time, twice the number of steps.
    TimeLadder refined() const { return {t_final_, 2 * steps_}; }

    friend bool operator==(const TimeLadder&, const TimeLadder&) = default;

private:
    double t_final_;
    int steps_;
};

/// A field sampled on every slice of a TimeLadder.
class SpaceTimeField {
public:
    SpaceTimeField(const GridSpec& grid, int components, TimeLadder ladder);
    SpaceTimeField(TimeLadder ladder, std::vector<Field> slices);

    const GridSpec& grid() const { return slices_.front().grid(); }
    int components() const { return slices_.front().components(); }
    const TimeLadder& ladder() const { return ladder_; }
    int steps() const { return ladder_.steps(); }

    const Field& slice(int j) const { return slices_[j]; }
    Field& slice(int j) { return slices_[j]; }
    std::span<const Field> slices() const { return slices_; }

    /// max over slices of Field::sup_norm.
    double sup_norm() const;

private:
    TimeLadder ladder_;
    std::vector<Field> slices_;
};

}  // namespace geoflow
