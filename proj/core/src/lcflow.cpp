#include "geoflow/lcflow.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "geoflow/field_ops.hpp"
#include "geoflow/heat.hpp"
#include "geoflow/norms.hpp"
#include "geoflow/sphere.hpp"

namespace geoflow::lcflow {

using spectral::Spectrum;

namespace {

constexpr double kDivergenceCap = 1e6;
constexpr int kDirectorDim = 3;

// u (x) u + grad d (x) grad d on the padded grid.
Spectrum stress_tensor(const Spectrum& u, const Spectrum& grad_d) {
    const int n = u.grid().dim();
    const int l = grad_d.components() / n;
    const std::array<const Spectrum*, 2> in{&u, &grad_d};
    return spectral::dealiased_apply(in, n * n, [n, l](std::span<const double> v, std::span<double> out) {
        const auto g = v.subspan(n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                double gram = 0.0;
                for (int a = 0; a < l; ++a) gram += g[i * l + a] * g[j * l + a];
                out[i * n + j] = v[i] * v[j] + gram;
            }
        }
    });
}

void check_state(const LCState& s) {
    const int n = s.u.grid().dim();
    if (n < 2) throw std::invalid_argument("liquid crystal flow needs n >= 2");
    if (s.u.components() != n) throw std::invalid_argument("velocity needs grid-dim components");
    if (s.d.components() != kDirectorDim) throw std::invalid_argument("director needs 3 components");
    if (!(s.u.grid() == s.d.grid()) || !(s.u.ladder() == s.d.ladder())) {
        throw std::invalid_argument("velocity and director differ in grid or ladder");
    }
}

SpaceTimeField add_free_evolution(std::vector<Spectrum>& coeffs, double sign, const Field& initial,
                                  const TimeLadder& ladder) {
    const Spectrum s0 = spectral::forward(initial);
    std::vector<Field> slices;
    slices.reserve(coeffs.size());
    slices.push_back(initial);
    for (int j = 1; j <= ladder.steps(); ++j) {
        Spectrum free = heat::heat_semigroup(s0, ladder.time(j));
        auto dst = free.coefficients();
        auto src = coeffs[j].coefficients();
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += sign * src[i];
        slices.push_back(spectral::inverse(free));
    }
    return {ladder, std::move(slices)};
}

double spectral_divergence_sup(const Field& u) { return spectral::divergence(u).sup_norm(); }

}  // namespace

double divergence_defect(const SpaceTimeField& u) {
    double worst = 0.0;
    for (const auto& s : u.slices()) worst = std::max(worst, spectral_divergence_sup(s));
    return worst;
}

SpaceTimeField t1_map(const LCState& state, const Field& u0) {
    check_state(state);
    const TimeLadder& ladder = state.u.ladder();
    std::vector<Spectrum> forcing;
    forcing.reserve(ladder.steps() + 1);
    forcing.emplace_back(u0.grid(), u0.grid().dim() * u0.grid().dim());
    for (int j = 1; j <= ladder.steps(); ++j) {
        const Spectrum su = spectral::forward(state.u.slice(j));
        const Spectrum gd = spectral::gradient(spectral::forward(state.d.slice(j)));
        forcing.push_back(stress_tensor(su, gd));
    }
    auto coeffs = heat::duhamel_V(forcing, ladder);
    return add_free_evolution(coeffs, -1.0, u0, ladder);
}

SpaceTimeField t2_map(const LCState& state, const Field& d0) {
    check_state(state);
    const sphere::SphereTarget target(kDirectorDim);
    const TimeLadder& ladder = state.d.ladder();
    std::vector<Spectrum> forcing;
    forcing.reserve(ladder.steps() + 1);
    forcing.emplace_back(d0.grid(), kDirectorDim);
    for (int j = 1; j <= ladder.steps(); ++j) {
        const Spectrum sd = spectral::forward(state.d.slice(j));
        const Spectrum su = spectral::forward(state.u.slice(j));
        forcing.push_back(hmflow::director_forcing(target, sd, &su));
    }
    auto coeffs = heat::duhamel_S(forcing, ladder);
    return add_free_evolution(coeffs, 1.0, d0, ladder);
}

LCState lc_map(const LCState& state, const Field& u0, const Field& d0) {
    return {t1_map(state, u0), t2_map(state, d0)};
}

LCSolveResult solve_lc(const Field& u0, const Field& d0, const SolverConfig& cfg) {
    cfg.validate();
    const int n = cfg.grid.dim();
    if (n != 2 && n != 3) throw std::invalid_argument("liquid crystal solver supports n = 2 or 3");
    if (!(u0.grid() == cfg.grid) || !(d0.grid() == cfg.grid)) {
        throw std::invalid_argument("initial data grid differs from solver grid");
    }
    if (u0.components() != n || d0.components() != kDirectorDim) {
        throw std::invalid_argument("initial data has wrong component counts");
    }
    if (spectral_divergence_sup(u0) > 1e-12 * std::max(1.0, u0.sup_norm())) {
        throw std::invalid_argument("initial velocity must be divergence-free");
    }
    for (std::size_t s = 0; s < d0.sites(); ++s) {
        double sq = 0.0;
        for (double v : d0.at(s)) sq += v * v;
        if (std::abs(std::sqrt(sq) - 1.0) > 1e-12) {
            throw std::invalid_argument("initial director must be unit-length to 1e-12");
        }
    }

    LCSolveResult result{{heat::caloric_extension(u0, cfg.ladder), heat::caloric_extension(d0, cfg.ladder)},
                         {}, {}, 0.0, 0.0, 0.0, 0.0, false, SolveStatus::no_convergence, {}};
    LCState& state = result.state;
    try {
        for (int k = 0; k < cfg.max_iters; ++k) {
            LCState next = lc_map(state, u0, d0);
            const double inc = norms::z_norm(next.u - state.u).value + norms::x_norm(next.d - state.d).value;
            result.increments.push_back(inc);
            if (k > 0) result.contraction_estimates.push_back(inc / result.increments[k - 1]);
            state = std::move(next);
            if (!std::isfinite(inc) || inc > kDivergenceCap) {
                result.message = "increments diverged";
                break;
            }
            if (inc <= cfg.picard_tol) {
                result.converged = true;
                result.status = SolveStatus::converged;
                break;
            }
        }
        if (!result.converged && result.message.empty()) result.message = "iteration limit reached";
    } catch (const sphere::TubeEscape& e) {
        result.status = SolveStatus::tube_escape;
        result.message = e.what();
        return result;
    } catch (const std::domain_error& e) {
        result.message = e.what();
        return result;
    }
    result.constraint_defect = sphere::constraint_defect(state.d);
    result.divergence_defect = divergence_defect(state.u);
    if (result.converged) {
        const LCState res = lc_residual(state);
        result.residual_u = res.u.sup_norm();
        result.residual_d = res.d.sup_norm();
    }
    return result;
}

LCState lc_residual(const LCState& state) {
    check_state(state);
    const sphere::SphereTarget target(kDirectorDim);
    const int m = state.u.steps();
    const double dt = state.u.ladder().dt();
    const GridSpec& grid = state.u.grid();
    const int n = grid.dim();
    const auto& modes = spectral::mode_table(grid);

    std::vector<Spectrum> su;
    std::vector<Spectrum> sd;
    for (int j = 0; j <= m; ++j) {
        su.push_back(spectral::forward(state.u.slice(j)));
        sd.push_back(spectral::forward(state.d.slice(j)));
    }
    auto time_derivative_plus_diffusion = [&](Spectrum& r, const std::vector<Spectrum>& s, int j, double sign) {
        for (int a = 0; a < r.components(); ++a) {
            auto dst = r.component(a);
            auto next = s[j + 1].component(a);
            auto prev = s[j - 1].component(a);
            auto cur = s[j].component(a);
            for (std::size_t i = 0; i < dst.size(); ++i) {
                dst[i] = (next[i] - prev[i]) / (2.0 * dt) + modes.laplacian_symbol(i) * cur[i] + sign * dst[i];
            }
        }
    };

    std::vector<Field> ru;
    std::vector<Field> rd;
    ru.emplace_back(grid, n);
    rd.emplace_back(grid, kDirectorDim);
    for (int j = 1; j < m; ++j) {
        const Spectrum gd = spectral::gradient(sd[j]);
        Spectrum vel = heat::leray_project(spectral::tensor_divergence(stress_tensor(su[j], gd)));
        time_derivative_plus_diffusion(vel, su, j, 1.0);
        ru.push_back(spectral::inverse(vel));
        Spectrum dir = hmflow::director_forcing(target, sd[j], &su[j]);
        time_derivative_plus_diffusion(dir, sd, j, -1.0);
        rd.push_back(spectral::inverse(dir));
    }
    ru.emplace_back(grid, n);
    rd.emplace_back(grid, kDirectorDim);
    return {{state.u.ladder(), std::move(ru)}, {state.d.ladder(), std::move(rd)}};
}

LCSweepReport lc_sweep(const std::function<std::pair<Field, Field>(double)>& family,
                       std::span<const double> alphas, const SolverConfig& cfg) {
    std::vector<double> sorted(alphas.begin(), alphas.end());
    std::sort(sorted.begin(), sorted.end());
    const double radius = norms::max_cylinder_radius(cfg.grid, cfg.ladder);
    LCSweepReport report;
    bool prefix_converged = true;
    for (double alpha : sorted) {
        const auto [u0, d0] = family(alpha);
        LCSweepRow row;
        row.alpha = alpha;
        row.data_size = norms::bmo_inv_norm(u0, radius, cfg.ladder).value + norms::bmo_seminorm(d0, radius).value;
        const LCSolveResult res = solve_lc(u0, d0, cfg);
        row.converged = res.converged;
        row.status = res.status;
        row.iterations = static_cast<int>(res.increments.size());
        row.theta = hmflow::measured_contraction(res.increments, 1e3 * cfg.picard_tol);
        row.constraint_defect = res.constraint_defect;
        if (res.converged) {
            row.solution_size =
                norms::z_norm(res.state.u).value + norms::x_seminorm(norms::x_norm(res.state.d));
            row.c_ratio = row.data_size > 0.0 ? row.solution_size / row.data_size : 0.0;
        }
        prefix_converged = prefix_converged && row.converged;
        if (prefix_converged) report.threshold = alpha;
        report.rows.push_back(row);
    }
    double last_theta = -1.0;
    for (const auto& row : report.rows) {
        if (!row.converged) continue;
        if (row.theta + 1e-9 < last_theta) report.theta_monotone = false;
        last_theta = std::max(last_theta, row.theta);
    }
    return report;
}

}  // namespace geoflow::lcflow
