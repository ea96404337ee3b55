#include "geoflow/hmflow.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "geoflow/field_ops.hpp"
#include "geoflow/heat.hpp"
#include "geoflow/norms.hpp"

namespace geoflow::hmflow {

using spectral::Spectrum;

namespace {

// Iterates whose increment exceeds this are treated as diverging.
constexpr double kDivergenceCap = 1e6;

void require_sphere_valued(const Field& u0) {
    for (std::size_t s = 0; s < u0.sites(); ++s) {
        double sq = 0.0;
        for (double v : u0.at(s)) sq += v * v;
        if (std::abs(std::sqrt(sq) - 1.0) > 1e-12) {
            throw std::invalid_argument("initial map must be sphere-valued to 1e-12");
        }
    }
}

SpaceTimeField from_spectra(const std::vector<Spectrum>& coeffs, const TimeLadder& ladder, const Field& first) {
    std::vector<Field> slices;
    slices.reserve(coeffs.size());
    slices.push_back(first);
    for (std::size_t j = 1; j < coeffs.size(); ++j) slices.push_back(spectral::inverse(coeffs[j]));
    return {ladder, std::move(slices)};
}

}  // namespace

void SolverConfig::validate() const {
    if (!(picard_tol > 0.0)) throw std::invalid_argument("picard_tol must be positive");
    if (max_iters < 2) throw std::invalid_argument("max_iters must be at least 2");
    if (!(constraint_tol > 0.0)) throw std::invalid_argument("constraint_tol must be positive");
}

const char* to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::converged: return "converged";
        case SolveStatus::no_convergence: return "no_convergence";
        case SolveStatus::tube_escape: return "tube_escape";
    }
    return "unknown";
}

Spectrum director_forcing(const sphere::SphereTarget& target, const Spectrum& u, const Spectrum* velocity) {
    const int l = u.components();
    const int n = u.grid().dim();
    if (l != target.ambient_dim()) throw std::invalid_argument("field width differs from target dimension");
    const Spectrum grad = spectral::gradient(u);
    if (velocity == nullptr) {
        const std::array<const Spectrum*, 2> in{&u, &grad};
        return spectral::dealiased_apply(in, l, [&target, l, n](std::span<const double> v, std::span<double> out) {
            target.second_fundamental_form(v.first(l), v.subspan(l, static_cast<std::size_t>(l * n)), n, out);
        });
    }
    if (velocity->components() != n) throw std::invalid_argument("velocity needs grid-dim components");
    const std::array<const Spectrum*, 3> in{&u, &grad, velocity};
    return spectral::dealiased_apply(in, l, [&target, l, n](std::span<const double> v, std::span<double> out) {
        const auto stack = v.subspan(l, static_cast<std::size_t>(l * n));
        const auto vel = v.subspan(static_cast<std::size_t>(l + l * n), n);
        target.second_fundamental_form(v.first(l), stack, n, out);
        for (int a = 0; a < l; ++a) {
            double adv = 0.0;
            for (int i = 0; i < n; ++i) adv += vel[i] * stack[i * l + a];
            out[a] -= adv;
        }
    });
}

SpaceTimeField picard_map(const SpaceTimeField& u, const Field& u0) {
    if (!(u.grid() == u0.grid()) || u.components() != u0.components()) {
        throw std::invalid_argument("iterate and initial data differ in shape");
    }
    const sphere::SphereTarget target(u0.components());
    const TimeLadder& ladder = u.ladder();
    std::vector<Spectrum> forcing;
    forcing.reserve(ladder.steps() + 1);
    forcing.emplace_back(u.grid(), u.components());
    for (int j = 1; j <= ladder.steps(); ++j) {
        forcing.push_back(director_forcing(target, spectral::forward(u.slice(j))));
    }
    auto coeffs = heat::duhamel_S(forcing, ladder);
    const Spectrum s0 = spectral::forward(u0);
    for (int j = 1; j <= ladder.steps(); ++j) {
        const Spectrum free = heat::heat_semigroup(s0, ladder.time(j));
        auto dst = coeffs[j].coefficients();
        auto src = free.coefficients();
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    }
    return from_spectra(coeffs, ladder, u0);
}

SolveResult solve_hmf(const Field& u0, const SolverConfig& cfg) {
    cfg.validate();
    if (!(u0.grid() == cfg.grid)) throw std::invalid_argument("initial data grid differs from solver grid");
    require_sphere_valued(u0);

    SolveResult result{heat::caloric_extension(u0, cfg.ladder), {}, {}, 0.0, 0.0, false,
                       SolveStatus::no_convergence, {}};
    SpaceTimeField& u = result.solution;
    try {
        for (int k = 0; k < cfg.max_iters; ++k) {
            SpaceTimeField next = picard_map(u, u0);
            const double inc = norms::x_norm(next - u).value;
            result.increments.push_back(inc);
            if (k > 0) result.contraction_estimates.push_back(inc / result.increments[k - 1]);
            u = std::move(next);
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
    result.constraint_defect = sphere::constraint_defect(u);
    if (result.converged) result.residual_norm = pde_residual(u).sup_norm();
    return result;
}

SpaceTimeField time_march_oracle(const Field& u0, const SolverConfig& cfg) {
    cfg.validate();
    const sphere::SphereTarget target(u0.components());
    const heat::ExponentialStep step(u0.grid(), cfg.ladder.dt());
    std::vector<Field> slices;
    slices.reserve(cfg.ladder.steps() + 1);
    slices.push_back(u0);
    Spectrum w = spectral::forward(u0);
    for (int j = 1; j <= cfg.ladder.steps(); ++j) {
        const Spectrum forcing = director_forcing(target, w);
        step.advance(w, forcing);
        slices.push_back(spectral::inverse(w));
    }
    return {cfg.ladder, std::move(slices)};
}

SpaceTimeField pde_residual(const SpaceTimeField& u) {
    const sphere::SphereTarget target(u.components());
    const int m = u.steps();
    const double dt = u.ladder().dt();
    const auto& modes = spectral::mode_table(u.grid());
    std::vector<Spectrum> coeffs;
    coeffs.reserve(m + 1);
    for (const auto& s : u.slices()) coeffs.push_back(spectral::forward(s));
    std::vector<Field> out;
    out.reserve(m + 1);
    out.emplace_back(u.grid(), u.components());
    for (int j = 1; j < m; ++j) {
        Spectrum r = director_forcing(target, coeffs[j]);
        for (int a = 0; a < r.components(); ++a) {
            auto dst = r.component(a);
            auto next = coeffs[j + 1].component(a);
            auto prev = coeffs[j - 1].component(a);
            auto cur = coeffs[j].component(a);
            for (std::size_t i = 0; i < dst.size(); ++i) {
                dst[i] = (next[i] - prev[i]) / (2.0 * dt) + modes.laplacian_symbol(i) * cur[i] - dst[i];
            }
        }
        out.push_back(spectral::inverse(r));
    }
    out.emplace_back(u.grid(), u.components());
    return {u.ladder(), std::move(out)};
}

double measured_contraction(const std::vector<double>& increments, double floor) {
    double theta = 0.0;
    for (std::size_t k = 1; k < increments.size(); ++k) {
        if (increments[k - 1] > floor) theta = std::max(theta, increments[k] / increments[k - 1]);
    }
    return theta;
}

SweepReport wellposedness_sweep(const std::function<Field(double)>& family, std::span<const double> alphas,
                                 const SolverConfig& cfg) {
    std::vector<double> sorted(alphas.begin(), alphas.end());
    std::sort(sorted.begin(), sorted.end());
    const double radius = norms::max_cylinder_radius(cfg.grid, cfg.ladder);

    SweepReport report;
    bool prefix_converged = true;
    const SpaceTimeField* previous = nullptr;
    double previous_alpha = 0.0;
    std::vector<SpaceTimeField> kept;
    kept.reserve(sorted.size());
    for (double alpha : sorted) {
        const Field u0 = family(alpha);
        SweepRow row;
        row.alpha = alpha;
        row.data_bmo = norms::bmo_seminorm(u0, radius).value;
        SolveResult res = solve_hmf(u0, cfg);
        row.converged = res.converged;
        row.status = res.status;
        row.iterations = static_cast<int>(res.increments.size());
        row.theta = measured_contraction(res.increments, 1e3 * cfg.picard_tol);
        row.constraint_defect = res.constraint_defect;
        if (res.converged) {
            row.solution_x = norms::x_seminorm(norms::x_norm(res.solution));
            row.c_ratio = row.data_bmo > 0.0 ? row.solution_x / row.data_bmo : 0.0;
            if (previous != nullptr && alpha != previous_alpha) {
                row.lipschitz = norms::x_norm(res.solution - *previous).value / std::abs(alpha - previous_alpha);
            }
            kept.push_back(std::move(res.solution));
            previous = &kept.back();
            previous_alpha = alpha;
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

}  // namespace geoflow::hmflow
