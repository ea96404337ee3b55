#include "geoflow/heat.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace geoflow::heat {

using spectral::Complex;
using spectral::Spectrum;

ExponentialStep::ExponentialStep(const GridSpec& grid, double dt) : grid_(grid), dt_(dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
    const auto& modes = spectral::mode_table(grid);
    decay_.resize(modes.size());
    weight_.resize(modes.size());
    for (std::size_t m = 0; m < modes.size(); ++m) {
        const double lam = modes.laplacian_symbol(m);
        decay_[m] = std::exp(-lam * dt);
        weight_[m] = lam > 0.0 ? -std::expm1(-lam * dt) / lam : dt;
    }
}

void ExponentialStep::propagate(Spectrum& w) const {
    for (int a = 0; a < w.components(); ++a) {
        auto c = w.component(a);
        for (std::size_t m = 0; m < c.size(); ++m) c[m] *= decay_[m];
    }
}

void ExponentialStep::advance(Spectrum& w, const Spectrum& forcing) const {
    if (forcing.components() != w.components()) {
        throw std::invalid_argument("forcing and state differ in component count");
    }
    for (int a = 0; a < w.components(); ++a) {
        auto c = w.component(a);
        auto f = forcing.component(a);
        for (std::size_t m = 0; m < c.size(); ++m) c[m] = decay_[m] * c[m] + weight_[m] * f[m];
    }
}

Spectrum heat_semigroup(const Spectrum& f, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("heat semigroup needs t >= 0");
    const auto& modes = spectral::mode_table(f.grid());
    Spectrum out = f;
    for (int a = 0; a < out.components(); ++a) {
        auto c = out.component(a);
        for (std::size_t m = 0; m < c.size(); ++m) c[m] *= std::exp(-modes.laplacian_symbol(m) * t);
    }
    return out;
}

Field heat_semigroup(const Field& f, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("heat semigroup needs t >= 0");
    if (t == 0.0) return f;
    return spectral::inverse(heat_semigroup(spectral::forward(f), t));
}

SpaceTimeField caloric_extension(const Field& u0, const TimeLadder& ladder) {
    const Spectrum s0 = spectral::forward(u0);
    std::vector<Field> slices;
    slices.reserve(ladder.steps() + 1);
    slices.push_back(u0);
    for (int j = 1; j <= ladder.steps(); ++j) {
        slices.push_back(spectral::inverse(heat_semigroup(s0, ladder.time(j))));
    }
    return {ladder, std::move(slices)};
}

std::vector<Spectrum> duhamel_S(std::span<const Spectrum> forcing, const TimeLadder& ladder) {
    if (forcing.size() != static_cast<std::size_t>(ladder.steps() + 1)) {
        throw std::invalid_argument("forcing must cover every ladder slice");
    }
    const Spectrum& first = forcing.front();
    const ExponentialStep step(first.grid(), ladder.dt());
    std::vector<Spectrum> out;
    out.reserve(forcing.size());
    out.emplace_back(first.grid(), first.components());
    for (int j = 1; j <= ladder.steps(); ++j) {
        Spectrum w = out.back();
        step.advance(w, forcing[j]);
        out.push_back(std::move(w));
    }
    return out;
}

SpaceTimeField duhamel_S(const SpaceTimeField& f) {
    std::vector<Spectrum> forcing;
    forcing.reserve(f.steps() + 1);
    forcing.emplace_back(f.grid(), f.components());
    for (int j = 1; j <= f.steps(); ++j) forcing.push_back(spectral::forward(f.slice(j)));
    const auto coeffs = duhamel_S(forcing, f.ladder());
    std::vector<Field> slices;
    slices.reserve(coeffs.size());
    slices.emplace_back(f.grid(), f.components());
    for (std::size_t j = 1; j < coeffs.size(); ++j) slices.push_back(spectral::inverse(coeffs[j]));
    return {f.ladder(), std::move(slices)};
}

Spectrum leray_project(const Spectrum& f) {
    const int n = f.grid().dim();
    if (f.components() != n) throw std::invalid_argument("Leray projection needs grid-dim components");
    const auto& modes = spectral::mode_table(f.grid());
    Spectrum out(f.grid(), n);
    if (n == 1) {
        out.component(0)[0] = f.component(0)[0];
        return out;
    }
    std::array<Complex, 3> v{};
    for (std::size_t m = 0; m < modes.size(); ++m) {
        const double k2 = modes.derivative_norm_sq(m);
        for (int a = 0; a < n; ++a) v[a] = f.component(a)[m];
        if (k2 == 0.0) {
            for (int a = 0; a < n; ++a) out.component(a)[m] = v[a];
            continue;
        }
        Complex dot{};
        for (int b = 0; b < n; ++b) dot += modes.derivative_symbol(m, b) * v[b];
        for (int a = 0; a < n; ++a) {
            out.component(a)[m] = v[a] - (modes.derivative_symbol(m, a) / k2) * dot;
        }
    }
    return out;
}

Field leray_project(const Field& f) { return spectral::inverse(leray_project(spectral::forward(f))); }

std::vector<Spectrum> duhamel_V(std::span<const Spectrum> forcing, const TimeLadder& ladder) {
    if (forcing.size() != static_cast<std::size_t>(ladder.steps() + 1)) {
        throw std::invalid_argument("forcing must cover every ladder slice");
    }
    const GridSpec& grid = forcing.front().grid();
    const int n = grid.dim();
    if (n < 2) throw std::invalid_argument("duhamel_V needs n >= 2");
    const ExponentialStep step(grid, ladder.dt());
    std::vector<Spectrum> out;
    out.reserve(forcing.size());
    out.emplace_back(grid, n);
    for (int j = 1; j <= ladder.steps(); ++j) {
        const Spectrum projected = leray_project(spectral::tensor_divergence(forcing[j]));
        Spectrum w = out.back();
        step.advance(w, projected);
        out.push_back(std::move(w));
    }
    return out;
}

SpaceTimeField duhamel_V(const SpaceTimeField& f) {
    const int n = f.grid().dim();
    if (f.components() != n * n) throw std::invalid_argument("duhamel_V needs an n x n tensor field");
    std::vector<Spectrum> forcing;
    forcing.reserve(f.steps() + 1);
    forcing.emplace_back(f.grid(), n * n);
    for (int j = 1; j <= f.steps(); ++j) forcing.push_back(spectral::forward(f.slice(j)));
    const auto coeffs = duhamel_V(forcing, f.ladder());
    std::vector<Field> slices;
    slices.reserve(coeffs.size());
    slices.emplace_back(f.grid(), n);
    for (std::size_t j = 1; j < coeffs.size(); ++j) slices.push_back(spectral::inverse(coeffs[j]));
    return {f.ladder(), std::move(slices)};
}

Field recover_pressure(const Field& u, const Field& d) {
    const GridSpec& grid = u.grid();
    const int n = grid.dim();
    if (n < 2) throw std::invalid_argument("pressure recovery needs n >= 2");
    if (u.components() != n) throw std::invalid_argument("velocity needs grid-dim components");
    if (!(d.grid() == grid)) throw std::invalid_argument("velocity and director grids differ");
    const int l = d.components();

    const Spectrum su = spectral::forward(u);
    const Spectrum gu = spectral::gradient(su);
    const Spectrum gd = spectral::gradient(spectral::forward(d));

    // u . grad u
    const std::array<const Spectrum*, 2> adv_in{&su, &gu};
    const Spectrum advection = spectral::dealiased_apply(adv_in, n, [n](auto in, auto out) {
        for (int a = 0; a < n; ++a) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += in[i] * in[n + i * n + a];
            out[a] = acc;
        }
    });
    // grad d (x) grad d
    const std::array<const Spectrum*, 1> gram_in{&gd};
    const Spectrum gram = spectral::dealiased_apply(gram_in, n * n, [n, l](auto in, auto out) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (int a = 0; a < l; ++a) acc += in[i * l + a] * in[j * l + a];
                out[i * n + j] = acc;
            }
        }
    });
    Spectrum total = spectral::tensor_divergence(gram);
    for (int a = 0; a < n; ++a) {
        auto dst = total.component(a);
        auto src = advection.component(a);
        for (std::size_t m = 0; m < dst.size(); ++m) dst[m] += src[m];
    }
    Spectrum source = spectral::divergence(total);
    const auto& modes = spectral::mode_table(grid);
    auto p = source.component(0);
    for (std::size_t m = 0; m < modes.size(); ++m) {
        const double lam = modes.laplacian_symbol(m);
        p[m] = lam > 0.0 ? p[m] / lam : Complex{};
    }
    return spectral::inverse(source);
}

}  // namespace geoflow::heat
