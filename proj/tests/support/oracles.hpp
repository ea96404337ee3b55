#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "geoflow/grid.hpp"

namespace oracle {

using geoflow::Field;
using geoflow::GridSpec;

inline constexpr double kPi = std::numbers::pi;

// Second-order centered difference of component a along axis i.
inline double fd_first(const Field& f, std::size_t site, int axis, int a) {
    const GridSpec& g = f.grid();
    auto c = g.coords(site);
    auto p = c;
    auto m = c;
    ++p[axis];
    --m[axis];
    return (f(g.site(p), a) - f(g.site(m), a)) / (2.0 * g.spacing());
}

inline double fd_laplacian(const Field& f, std::size_t site, int a) {
    const GridSpec& g = f.grid();
    const double h = g.spacing();
    auto c = g.coords(site);
    double acc = 0.0;
    for (int i = 0; i < g.dim(); ++i) {
        auto p = c;
        auto m = c;
        ++p[i];
        --m[i];
        acc += (f(g.site(p), a) - 2.0 * f(site, a) + f(g.site(m), a)) / (h * h);
    }
    return acc;
}

// Smooth, band-limited random field: a handful of low modes with random
// amplitudes and phases.
inline Field smooth_random(const GridSpec& g, int comps, std::uint64_t seed, int kmax = 3) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    struct Term {
        std::array<int, 3> k;
        int comp;
        double a, b;
    };
    std::vector<Term> terms;
    for (int c = 0; c < comps; ++c) {
        for (int t = 0; t < 6; ++t) {
            Term term{{0, 0, 0}, c, u(rng), u(rng)};
            for (int i = 0; i < g.dim(); ++i) term.k[i] = static_cast<int>(std::floor((u(rng) + 1.0) * 0.5 * (2 * kmax + 1))) - kmax;
            terms.push_back(term);
        }
    }
    const double w = 2.0 * kPi / g.period();
    return Field::from_function(g, comps, [&](std::span<const double> x, std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
        for (const auto& t : terms) {
            double ph = 0.0;
            for (int i = 0; i < g.dim(); ++i) ph += w * t.k[i] * x[i];
            out[t.comp] += t.a * std::cos(ph) + t.b * std::sin(ph);
        }
    });
}

// Unstructured random values (white noise).
inline Field white_noise(const GridSpec& g, int comps, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Field f(g, comps);
    for (double& v : f.values()) v = u(rng);
    return f;
}

// Exhaustive BMO: every center, every radius k*h for k = 1..floor(rmax/h),
// r^-n weighting, ball by torus distance |o|^2 h^2 <= r^2 with the same
// relative slack as the library. Scalar f.
inline double brute_force_bmo(const Field& f, double rmax) {
    const GridSpec& g = f.grid();
    const int n = g.dim();
    const double h = g.spacing();
    const int kmax = static_cast<int>(std::floor(rmax / h + 1e-9));
    double best = 0.0;
    for (int k = 1; k <= kmax; ++k) {
        const double r = k * h;
        const double lim = (r / h) * (r / h) * (1.0 + 1e-12);
        std::vector<std::array<int, 3>> offs;
        const int ext = static_cast<int>(std::ceil(r / h));
        for (int a = -ext; a <= ext; ++a)
            for (int b = (n >= 2 ? -ext : 0); b <= (n >= 2 ? ext : 0); ++b)
                for (int c = (n >= 3 ? -ext : 0); c <= (n >= 3 ? ext : 0); ++c)
                    if (double(a * a + b * b + c * c) <= lim) offs.push_back({a, b, c});
        for (std::size_t s = 0; s < g.sites(); ++s) {
            const auto base = g.coords(s);
            double mean = 0.0;
            for (const auto& o : offs) mean += f(g.site({base[0] + o[0], base[1] + o[1], base[2] + o[2]}), 0);
            mean /= static_cast<double>(offs.size());
            double acc = 0.0;
            for (const auto& o : offs) acc += std::abs(f(g.site({base[0] + o[0], base[1] + o[1], base[2] + o[2]}), 0) - mean);
            best = std::max(best, acc * std::pow(h, n) / std::pow(r, n));
        }
    }
    return best;
}

inline double max_abs_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

inline double l2(const Field& f) {
    double acc = 0.0;
    for (double v : f.values()) acc += v * v;
    return std::sqrt(acc);
}

}  // namespace oracle

namespace oracle {

// Offsets within torus distance r, any order.
inline std::vector<std::array<int, 3>> offsets(const GridSpec& g, double r) {
    const int n = g.dim();
    const double q = r / g.spacing();
    const double lim = q * q * (1.0 + 1e-12);
    const int ext = static_cast<int>(std::ceil(q));
    std::vector<std::array<int, 3>> out;
    for (int a = -ext; a <= ext; ++a)
        for (int b = (n >= 2 ? -ext : 0); b <= (n >= 2 ? ext : 0); ++b)
            for (int c = (n >= 3 ? -ext : 0); c <= (n >= 3 ? ext : 0); ++c)
                if (double(a * a + b * b + c * c) <= lim) out.push_back({a, b, c});
    return out;
}

// sup over centers and the given radii of r^-n int_{B_r x [0, t_k]} density,
// k = ceil(r^2 / dt), trapezoid in time. density[j] is a scalar Field.
inline double brute_force_carleson(const std::vector<Field>& density, double dt, const std::vector<double>& radii) {
    const GridSpec& g = density.front().grid();
    const int m = static_cast<int>(density.size()) - 1;
    double best = 0.0;
    for (double r : radii) {
        int k = static_cast<int>(std::ceil(r * r / dt - 1e-9));
        k = std::clamp(k, 1, m);
        std::vector<double> integral(g.sites(), 0.0);
        for (int j = 0; j <= k; ++j) {
            const double w = (j == 0 || j == k) ? 0.5 * dt : dt;
            for (std::size_t s = 0; s < g.sites(); ++s) integral[s] += w * density[j](s, 0);
        }
        const auto offs = offsets(g, r);
        for (std::size_t s = 0; s < g.sites(); ++s) {
            const auto c = g.coords(s);
            double acc = 0.0;
            for (const auto& o : offs) acc += integral[g.site({c[0] + o[0], c[1] + o[1], c[2] + o[2]})];
            best = std::max(best, acc * std::pow(g.spacing() / r, g.dim()));
        }
    }
    return best;
}

}  // namespace oracle
