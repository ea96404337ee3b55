#include "geoflow/data.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>

namespace geoflow::data {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Mode {
    std::array<int, 3> k{};
    double a = 0.0;
    double b = 0.0;
};

// Uniform on [-1, 1) from the top 53 bits; keeps the stream identical across
// standard libraries.
double uniform_pm1(std::mt19937_64& rng) {
    return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
}

// One representative per +-k pair, nonzero k, every component in [-kmax, kmax].
std::vector<Mode> random_modes(int dim, int kmax, std::uint64_t seed) {
    if (kmax < 1) throw std::invalid_argument("modes must be at least 1");
    std::mt19937_64 rng(seed);
    std::vector<Mode> out;
    const int k2 = dim >= 2 ? kmax : 0;
    const int k3 = dim >= 3 ? kmax : 0;
    for (int i = 0; i <= kmax; ++i) {
        for (int j = -k2; j <= k2; ++j) {
            for (int l = -k3; l <= k3; ++l) {
                const bool positive = i > 0 || (i == 0 && (j > 0 || (j == 0 && l > 0)));
                if (!positive) continue;
                Mode m;
                m.k = {i, j, l};
                m.a = uniform_pm1(rng);
                m.b = uniform_pm1(rng);
                out.push_back(m);
            }
        }
    }
    return out;
}

double phase(const Mode& m, std::span<const double> x, double scale) {
    double p = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) p += m.k[i] * x[i];
    return scale * p;
}

// Normalized so the sum has unit sup bound.
double mode_weight(const std::vector<Mode>& modes) {
    double total = 0.0;
    for (const auto& m : modes) total += std::abs(m.a) + std::abs(m.b);
    return total > 0.0 ? 1.0 / total : 0.0;
}

Field unit_from_angle(const Field& theta, int target_dim) {
    if (target_dim != 2 && target_dim != 3) throw std::invalid_argument("target_dim must be 2 or 3");
    Field out(theta.grid(), target_dim);
    for (std::size_t s = 0; s < theta.sites(); ++s) {
        out(s, 0) = std::cos(theta(s, 0));
        out(s, 1) = std::sin(theta(s, 0));
    }
    return out;
}

Field hedgehog(const FamilyParams& p, const GridSpec& grid) {
    const double L = grid.period();
    const int n = grid.dim();
    const double c = 0.5 * L;
    const double amp = p.alpha * L / kTwoPi;
    // The e3 offset exceeds |amp|, so the third component never vanishes.
    const double offset = n == 3 ? 1.0 + std::abs(amp) : 1.0;
    return Field::from_function(grid, 3, [&](std::span<const double> x, std::span<double> out) {
        std::array<double, 3> y{0.0, 0.0, offset};
        for (int i = 0; i < n; ++i) y[i] += amp * std::sin(kTwoPi * (x[i] - c) / L);
        double r = std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
        for (int a = 0; a < 3; ++a) out[a] = y[a] / r;
        r = std::sqrt(out[0] * out[0] + out[1] * out[1] + out[2] * out[2]);
        for (int a = 0; a < 3; ++a) out[a] /= r;
    });
}

}  // namespace

Field angle_field(const std::string& family, const FamilyParams& p, const GridSpec& grid, std::uint64_t seed) {
    const double scale = kTwoPi / grid.period();
    if (family == "angle_modes") {
        const auto modes = random_modes(grid.dim(), p.modes, seed);
        const double w = p.alpha * mode_weight(modes);
        return Field::from_function(grid, 1, [&](std::span<const double> x, std::span<double> out) {
            double acc = 0.0;
            for (const auto& m : modes) {
                const double ph = phase(m, x, scale);
                acc += m.a * std::cos(ph) + m.b * std::sin(ph);
            }
            out[0] = w * acc;
        });
    }
    if (family == "oscillatory") {
        if (p.wavenumber < 1) throw std::invalid_argument("wavenumber must be at least 1");
        return Field::from_function(grid, 1, [&](std::span<const double> x, std::span<double> out) {
            out[0] = p.alpha * std::sin(scale * p.wavenumber * x[0]);
        });
    }
    throw std::invalid_argument("no angle field for family '" + family + "'");
}

Field sphere_data(const std::string& family, const FamilyParams& p, const GridSpec& grid, std::uint64_t seed) {
    if (family == "constant") {
        Field out(grid, p.target_dim);
        for (std::size_t s = 0; s < grid.sites(); ++s) out(s, 0) = 1.0;
        return out;
    }
    if (family == "angle_modes" || family == "oscillatory") {
        return unit_from_angle(angle_field(family, p, grid, seed), p.target_dim);
    }
    if (family == "hedgehog") {
        if (p.target_dim != 3) throw std::invalid_argument("hedgehog family is S^2-valued");
        return hedgehog(p, grid);
    }
    throw std::invalid_argument("unknown sphere family '" + family + "'");
}

Field velocity_data(const std::string& family, const FamilyParams& p, const GridSpec& grid, std::uint64_t seed) {
    const int n = grid.dim();
    if (n < 2) throw std::invalid_argument("velocity data needs n >= 2");
    const double scale = kTwoPi / grid.period();
    if (family == "zero") return Field(grid, n);
    if (family == "taylor_green") {
        return Field::from_function(grid, n, [&](std::span<const double> x, std::span<double> out) {
            out[0] = p.alpha * std::sin(scale * x[0]) * std::cos(scale * x[1]);
            out[1] = -p.alpha * std::cos(scale * x[0]) * std::sin(scale * x[1]);
        });
    }
    if (family == "stream") {
        // Planar modes only, so u = (d_2 psi, -d_1 psi, 0) is exact in n = 3 too.
        auto modes = random_modes(2, p.modes, seed);
        const double w = p.alpha * mode_weight(modes);
        return Field::from_function(grid, n, [&](std::span<const double> x, std::span<double> out) {
            double d1 = 0.0;
            double d2 = 0.0;
            for (const auto& m : modes) {
                const double ph = phase(m, x.first(2), scale);
                const double dpsi = -m.a * std::sin(ph) + m.b * std::cos(ph);
                d1 += scale * m.k[0] * dpsi;
                d2 += scale * m.k[1] * dpsi;
            }
            out[0] = w * d2;
            out[1] = -w * d1;
        });
    }
    throw std::invalid_argument("unknown velocity family '" + family + "'");
}

const std::vector<std::string>& sphere_families() {
    static const std::vector<std::string> names{"constant", "angle_modes", "oscillatory", "hedgehog"};
    return names;
}

const std::vector<std::string>& velocity_families() {
    static const std::vector<std::string> names{"zero", "stream", "taylor_green"};
    return names;
}

}  // namespace geoflow::data
