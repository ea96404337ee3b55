#include "geoflow/app/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>

#include "geoflow/data.hpp"
#include "geoflow/field_ops.hpp"
#include "geoflow/heat.hpp"
#include "geoflow/hmflow.hpp"
#include "geoflow/lcflow.hpp"
#include "geoflow/norms.hpp"
#include "geoflow/spectral.hpp"
#include "geoflow/sphere.hpp"

namespace geoflow::app {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using hmflow::SolverConfig;
using Profile = std::function<double(std::span<const double>)>;

double uniform_pm1(std::mt19937_64& rng) { return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0; }

// Random trigonometric sum over |k_i| <= kmax with unit l1 coefficient mass.
Profile smooth_profile(int dim, int kmax, double period, std::uint64_t seed) {
    struct Term {
        std::array<int, 3> k;
        double a;
        double b;
    };
    std::mt19937_64 rng(seed);
    std::vector<Term> terms;
    const int k2 = dim >= 2 ? kmax : 0;
    const int k3 = dim >= 3 ? kmax : 0;
    double mass = 0.0;
    for (int i = 0; i <= kmax; ++i) {
        for (int j = -k2; j <= k2; ++j) {
            for (int l = -k3; l <= k3; ++l) {
                Term t{{i, j, l}, uniform_pm1(rng), uniform_pm1(rng)};
                mass += std::abs(t.a) + std::abs(t.b);
                terms.push_back(t);
            }
        }
    }
    const double scale = kTwoPi / period;
    return [terms, mass, scale, dim](std::span<const double> x) {
        double acc = 0.0;
        for (const auto& t : terms) {
            double ph = 0.0;
            for (int i = 0; i < dim; ++i) ph += t.k[i] * x[i];
            acc += t.a * std::cos(scale * ph) + t.b * std::sin(scale * ph);
        }
        return acc / mass;
    };
}

// Periodized Gaussian bump centred at c, in torus distance.
Profile bump_profile(int dim, double period, double width, std::array<double, 3> c) {
    return [=](std::span<const double> x) {
        double d2 = 0.0;
        for (int i = 0; i < dim; ++i) {
            double d = std::remainder(x[i] - c[i], period);
            d2 += d * d;
        }
        return std::exp(-0.5 * d2 / (width * width));
    };
}

Field sample(const GridSpec& g, const std::vector<Profile>& comps) {
    return Field::from_function(g, static_cast<int>(comps.size()), [&](std::span<const double> x, std::span<double> out) {
        for (std::size_t a = 0; a < comps.size(); ++a) out[a] = comps[a](x);
    });
}

SpaceTimeField separable(const Field& f, const TimeLadder& ladder, const std::function<double(double)>& phi) {
    std::vector<Field> slices;
    for (int j = 0; j <= ladder.steps(); ++j) slices.push_back(phi(ladder.time(j)) * f);
    return {ladder, std::move(slices)};
}

double rel_diff(const Field& a, const Field& b) { return (a - b).sup_norm() / std::max(b.sup_norm(), 1e-300); }

Field angle_map(const Field& theta, int target_dim) {
    Field u(theta.grid(), target_dim);
    for (std::size_t s = 0; s < u.sites(); ++s) {
        u(s, 0) = std::cos(theta(s, 0));
        u(s, 1) = std::sin(theta(s, 0));
    }
    return u;
}

double spectral_energy(const spectral::Spectrum& s, const GridSpec& g) {
    const auto& modes = spectral::mode_table(g);
    const int m = g.points();
    double acc = 0.0;
    for (int a = 0; a < s.components(); ++a) {
        const auto c = s.component(a);
        for (std::size_t i = 0; i < s.modes(); ++i) {
            const int k_last = modes.integer_wavenumber(i, g.dim() - 1);
            const double mult = (k_last == 0 || std::abs(k_last) == m / 2) ? 1.0 : 2.0;
            acc += mult * std::norm(c[i]);
        }
    }
    return acc;
}

CriterionResult spectral_backbone(std::uint64_t seed) {
    CriterionResult r{1, "spectral backbone", {}, {}};
    const GridSpec g(2, 64, kTwoPi);
    const std::vector<std::array<int, 2>> ks{{1, 0}, {0, 3}, {2, -3}, {5, 1}, {4, 4}};
    const double t = 0.1;
    double decay = 0.0;
    for (const auto& k : ks) {
        const Field f = Field::from_function(g, 1, [&](auto x, auto out) { out[0] = std::cos(k[0] * x[0] + k[1] * x[1]); });
        const double factor = std::exp(-(k[0] * k[0] + k[1] * k[1]) * t);
        decay = std::max(decay, rel_diff(heat::heat_semigroup(f, t), factor * f));
    }
    r.expect("eigenmode_decay_rel", decay, "<=", 1e-12);

    const Field f = sample(g, {smooth_profile(2, 6, g.period(), seed), smooth_profile(2, 3, g.period(), seed + 1)});
    const Field both = heat::heat_semigroup(f, 0.3);
    const Field composed = heat::heat_semigroup(heat::heat_semigroup(f, 0.1), 0.2);
    r.expect("semigroup_law_rel", rel_diff(composed, both), "<=", 1e-12);

    double phys = 0.0;
    for (double v : f.values()) phys += v * v;
    phys /= static_cast<double>(g.sites());
    const double spec = spectral_energy(spectral::forward(f), g);
    r.expect("parseval_rel", std::abs(phys - spec) / phys, "<=", 1e-12);

    const Field p = heat::leray_project(f);
    r.expect("leray_idempotence_rel", rel_diff(heat::leray_project(p), p), "<=", 1e-12);

    const sphere::SphereTarget target(3);
    const Field y = sample(g, {smooth_profile(2, 2, g.period(), seed + 2), smooth_profile(2, 2, g.period(), seed + 3),
                               [](auto) { return 1.0; }});
    double proj = 0.0;
    for (std::size_t s = 0; s < y.sites(); ++s) {
        const auto once = target.project(y.at(s));
        const auto twice = target.project(once);
        for (std::size_t a = 0; a < once.size(); ++a) proj = std::max(proj, std::abs(once[a] - twice[a]));
    }
    r.expect("sphere_projection_idempotence", proj, "<=", 1e-12);
    return r;
}

struct ForcingMember {
    Profile space;
    std::function<double(double)> time;
};

std::vector<ForcingMember> forcing_corpus(std::uint64_t seed, double L) {
    std::vector<Profile> space{smooth_profile(2, 1, L, seed), smooth_profile(2, 2, L, seed + 1),
                               smooth_profile(2, 4, L, seed + 2), bump_profile(2, L, 0.5, {1.0, 2.0, 0.0}),
                               bump_profile(2, L, 1.0, {4.0, 3.0, 0.0})};
    std::vector<std::function<double(double)>> time{[](double) { return 1.0; }, [](double t) { return std::exp(-4.0 * t); },
                                                    [](double t) { return std::cos(8.0 * t); },
                                                    [](double t) { return 4.0 * t; }};
    std::vector<ForcingMember> out;
    for (const auto& s : space) {
        for (const auto& t : time) out.push_back({s, t});
    }
    return out;
}

CriterionResult operator_bounds(std::uint64_t seed) {
    CriterionResult r{2, "operator bounds", {}, {}};
    const double L = kTwoPi;
    const TimeLadder ladder(0.25, 16);
    const auto corpus = forcing_corpus(seed, L);
    r.report.emplace_back("corpus_size", static_cast<double>(corpus.size()));
    std::array<double, 2> s_max{};
    std::array<double, 2> v_max{};
    const std::array<int, 2> sizes{32, 64};
    for (int level = 0; level < 2; ++level) {
        const GridSpec g(2, sizes[level], L);
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            const auto& member = corpus[i];
            const SpaceTimeField f = separable(sample(g, {member.space}), ladder, member.time);
            const double s_ratio = norms::x_norm(heat::duhamel_S(f)).value / norms::y_norm(f).value;
            std::vector<Profile> tensor;
            for (int c = 0; c < 4; ++c) {
                tensor.push_back(c == 0 ? member.space : smooth_profile(2, 2, L, seed + 100 * (i + 1) + c));
            }
            const SpaceTimeField ft = separable(sample(g, tensor), ladder, member.time);
            const double v_ratio = norms::z_norm(heat::duhamel_V(ft)).value / norms::y_norm(ft).value;
            s_max[level] = std::max(s_max[level], s_ratio);
            v_max[level] = std::max(v_max[level], v_ratio);
        }
    }
    r.report.emplace_back("S_ratio_max_M32", s_max[0]);
    r.report.emplace_back("S_ratio_max_M64", s_max[1]);
    r.report.emplace_back("V_ratio_max_M32", v_max[0]);
    r.report.emplace_back("V_ratio_max_M64", v_max[1]);
    r.expect("corpus_size", static_cast<double>(corpus.size()), ">=", 20.0);
    r.expect("S_ratio_finite", std::isfinite(s_max[0]) && std::isfinite(s_max[1]) ? 1.0 : 0.0, ">=", 1.0);
    r.expect("V_ratio_finite", std::isfinite(v_max[0]) && std::isfinite(v_max[1]) ? 1.0 : 0.0, ">=", 1.0);
    r.expect("S_ratio_max_relative_change", std::abs(s_max[1] - s_max[0]) / s_max[0], "<=", 0.2);
    r.expect("V_ratio_max_relative_change", std::abs(v_max[1] - v_max[0]) / v_max[0], "<=", 0.2);
    return r;
}

CriterionResult bmo_carleson(std::uint64_t seed) {
    CriterionResult r{3, "BMO/Carleson equivalence", {}, {}};
    const GridSpec g(2, 32, kTwoPi);
    const double R = g.period() / 8.0;
    const TimeLadder ladder(R * R, 32);
    std::vector<Field> corpus;
    data::FamilyParams p;
    p.target_dim = 3;
    for (double alpha : {1e-3, 1e-2, 1e-1, 1.0}) {
        p.alpha = alpha;
        for (std::uint64_t s = 0; s < 3; ++s) corpus.push_back(data::sphere_data("angle_modes", p, g, seed + s));
        p.wavenumber = 4;
        corpus.push_back(data::sphere_data("oscillatory", p, g, seed));
        p.wavenumber = 2;
        corpus.push_back(data::sphere_data("oscillatory", p, g, seed));
        corpus.push_back(data::sphere_data("hedgehog", p, g, seed));
    }
    double lo = INFINITY;
    double hi = 0.0;
    for (const auto& f : corpus) {
        const double ratio = norms::carleson_bmo(f, R, ladder).value / norms::bmo_seminorm(f, R).value;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    r.report.emplace_back("c1", lo);
    r.report.emplace_back("c2", hi);
    r.expect("corpus_size", static_cast<double>(corpus.size()), ">=", 20.0);
    r.expect("bracket_width_c2_over_c1", hi / lo, "<=", 20.0);

    const Field f = sample(g, {smooth_profile(2, 3, g.period(), seed + 7), smooth_profile(2, 5, g.period(), seed + 8)});
    const SpaceTimeField ext = heat::caloric_extension(f, ladder);
    const SpaceTimeField forcing = separable(f, ladder, [](double t) { return std::exp(-t); });
    double worst = 0.0;
    for (double lambda : {3.0, -2.5, 1e-3}) {
        auto rel = [&](double scaled, double base) { return std::abs(scaled - std::abs(lambda) * base) / (std::abs(lambda) * base); };
        worst = std::max(worst, rel(norms::bmo_seminorm(lambda * f, R).value, norms::bmo_seminorm(f, R).value));
        worst = std::max(worst, rel(norms::carleson_bmo(lambda * f, R, ladder).value, norms::carleson_bmo(f, R, ladder).value));
        worst = std::max(worst, rel(norms::bmo_inv_norm(lambda * f, R, ladder).value, norms::bmo_inv_norm(f, R, ladder).value));
        worst = std::max(worst, rel(norms::x_norm(lambda * ext).value, norms::x_norm(ext).value));
        worst = std::max(worst, rel(norms::y_norm(lambda * forcing).value, norms::y_norm(forcing).value));
        worst = std::max(worst, rel(norms::z_norm(lambda * ext).value, norms::z_norm(ext).value));
    }
    r.expect("homogeneity_rel", worst, "<=", 1e-12);
    return r;
}

double angle_oracle_error(const SpaceTimeField& u, const Field& theta0) {
    double err = 0.0;
    for (int j = 0; j <= u.steps(); ++j) {
        const Field expect = angle_map(heat::heat_semigroup(theta0, u.ladder().time(j)), u.components());
        err = std::max(err, (u.slice(j) - expect).sup_norm());
    }
    return err;
}

CriterionResult circle_oracle(std::uint64_t seed) {
    CriterionResult r{4, "circle-reduction oracle", {}, {}};
    const GridSpec g(1, 64, kTwoPi);
    data::FamilyParams p;
    p.alpha = 0.2;
    p.target_dim = 2;
    const Field theta0 = data::angle_field("angle_modes", p, g, seed);
    const Field u0 = angle_map(theta0, 2);
    std::array<double, 2> err{};
    const std::array<int, 2> steps{128, 256};
    for (int i = 0; i < 2; ++i) {
        const auto res = hmflow::solve_hmf(u0, SolverConfig{g, TimeLadder(0.5, steps[i])});
        r.expect("converged_m" + std::to_string(steps[i]), res.converged ? 1.0 : 0.0, ">=", 1.0);
        err[i] = angle_oracle_error(res.solution, theta0);
    }
    r.report.emplace_back("error_m128", err[0]);
    r.expect("error_m256", err[1], "<=", 5e-3);
    r.expect("halving_ratio_lower", err[0] / err[1], ">=", 1.6);
    r.expect("halving_ratio_upper", err[0] / err[1], "<=", 2.4);
    return r;
}

std::pair<Field, Field> coupled_data(const GridSpec& g, double alpha, std::uint64_t seed) {
    data::FamilyParams p;
    p.alpha = alpha;
    return {data::velocity_data("stream", p, g, seed), data::sphere_data("hedgehog", p, g, seed)};
}

Field hmf_data(const GridSpec& g, double alpha, std::uint64_t seed) {
    data::FamilyParams p;
    p.alpha = alpha;
    return data::sphere_data("angle_modes", p, g, seed);
}

CriterionResult constraint(std::uint64_t seed) {
    CriterionResult r{5, "constraint preservation", {}, {}};
    const GridSpec g(2, 64, kTwoPi);
    const Field u0 = hmf_data(g, 0.3, seed);
    const auto [v0, d0] = coupled_data(g, 0.3, seed);
    double prev_h = INFINITY;
    double prev_l = INFINITY;
    bool improving = true;
    for (int m : {64, 128, 256}) {
        const SolverConfig cfg{g, TimeLadder(0.25, m)};
        const auto h = hmflow::solve_hmf(u0, cfg);
        const auto l = lcflow::solve_lc(v0, d0, cfg);
        r.expect("hmf_converged_m" + std::to_string(m), h.converged ? 1.0 : 0.0, ">=", 1.0);
        r.expect("lc_converged_m" + std::to_string(m), l.converged ? 1.0 : 0.0, ">=", 1.0);
        r.report.emplace_back("hmf_defect_m" + std::to_string(m), h.constraint_defect);
        r.report.emplace_back("lc_defect_m" + std::to_string(m), l.constraint_defect);
        improving = improving && h.constraint_defect < prev_h && l.constraint_defect < prev_l;
        prev_h = h.constraint_defect;
        prev_l = l.constraint_defect;
    }
    r.expect("hmf_defect_m256", prev_h, "<=", 1e-4);
    r.expect("lc_defect_m256", prev_l, "<=", 1e-4);
    r.expect("defects_improve_under_refinement", improving ? 1.0 : 0.0, ">=", 1.0);
    return r;
}

// Largest ratio increments[k + 1] / increments[k] over k >= first.
double worst_ratio(const std::vector<double>& increments, std::size_t first) {
    double worst = 0.0;
    for (std::size_t k = first + 1; k < increments.size(); ++k) worst = std::max(worst, increments[k] / increments[k - 1]);
    return worst;
}

CriterionResult contraction(std::uint64_t seed) {
    CriterionResult r{6, "contraction", {}, {}};
    const GridSpec g(2, 32, kTwoPi);
    const SolverConfig cfg{g, TimeLadder(0.25, 32)};
    const std::vector<double> alphas{0.02, 0.05, 0.1, 0.2};
    double worst_h = 0.0;
    double worst_l = 0.0;
    double last_h = -1.0;
    double last_l = -1.0;
    bool monotone_h = true;
    bool monotone_l = true;
    for (double alpha : alphas) {
        const auto h = hmflow::solve_hmf(hmf_data(g, alpha, seed), cfg);
        const auto [v0, d0] = coupled_data(g, alpha, seed);
        const auto l = lcflow::solve_lc(v0, d0, cfg);
        const std::string tag = "_alpha" + std::to_string(alpha).substr(0, 4);
        r.expect("hmf_converged" + tag, h.converged ? 1.0 : 0.0, ">=", 1.0);
        r.expect("lc_converged" + tag, l.converged ? 1.0 : 0.0, ">=", 1.0);
        const double th = worst_ratio(h.increments, 0);
        const double tl = worst_ratio(l.increments, 0);
        r.report.emplace_back("hmf_theta" + tag, th);
        r.report.emplace_back("lc_theta" + tag, tl);
        worst_h = std::max(worst_h, th);
        worst_l = std::max(worst_l, tl);
        monotone_h = monotone_h && th >= last_h;
        monotone_l = monotone_l && tl >= last_l;
        last_h = th;
        last_l = tl;
        if (alpha == alphas.front()) {
            r.expect("hmf_smallest_iterations", static_cast<double>(h.increments.size()), ">=", 3.0);
            r.expect("lc_smallest_iterations", static_cast<double>(l.increments.size()), ">=", 3.0);
            r.expect("hmf_smallest_ratio_after_iteration_2", worst_ratio(h.increments, 1), "<=", 0.5);
            r.expect("lc_smallest_ratio_after_iteration_2", worst_ratio(l.increments, 1), "<=", 0.5);
        }
    }
    r.expect("hmf_all_ratios", worst_h, "<", 1.0);
    r.expect("lc_all_ratios", worst_l, "<", 1.0);
    r.report.emplace_back("hmf_theta_monotone_in_alpha", monotone_h ? 1.0 : 0.0);
    r.report.emplace_back("lc_theta_monotone_in_alpha", monotone_l ? 1.0 : 0.0);
    return r;
}

CriterionResult taylor_green(std::uint64_t) {
    CriterionResult r{7, "Taylor-Green exactness", {}, {}};
    const GridSpec g(2, 32, kTwoPi);
    data::FamilyParams p;
    p.alpha = 1.0;
    const Field u0 = data::velocity_data("taylor_green", p, g, 0);
    Field d0(g, 3);
    for (std::size_t s = 0; s < d0.sites(); ++s) d0(s, 2) = 1.0;
    std::array<double, 2> err{};
    const std::array<int, 2> steps{128, 256};
    for (int i = 0; i < 2; ++i) {
        const auto res = lcflow::solve_lc(u0, d0, SolverConfig{g, TimeLadder(0.5, steps[i])});
        r.expect("converged_m" + std::to_string(steps[i]), res.converged ? 1.0 : 0.0, ">=", 1.0);
        for (int j = 0; j <= steps[i]; ++j) {
            const Field expect = std::exp(-2.0 * res.state.u.ladder().time(j)) * u0;
            err[i] = std::max(err[i], (res.state.u.slice(j) - expect).sup_norm());
        }
    }
    r.report.emplace_back("error_m128", err[0]);
    r.expect("error_m256", err[1], "<=", 1e-3);
    // First order or better; at roundoff the error cannot halve further.
    r.expect("error_m256_vs_first_order_bound", err[1], "<=", std::max(0.6 * err[0], 1e-12));
    return r;
}

CriterionResult gradient_forcing(std::uint64_t) {
    CriterionResult r{8, "gradient-forcing decoupling", {}, {}};
    const GridSpec g(2, 32, kTwoPi);
    const double alpha = 0.3;
    const Field theta = Field::from_function(g, 1, [&](auto x, auto out) { out[0] = alpha * std::sin(x[0]); });
    Field d0(g, 3);
    for (std::size_t s = 0; s < d0.sites(); ++s) {
        d0(s, 0) = std::cos(theta(s, 0));
        d0(s, 1) = std::sin(theta(s, 0));
    }
    const auto res = lcflow::solve_lc(Field(g, 2), d0, SolverConfig{g, TimeLadder(0.25, 64)});
    r.expect("converged", res.converged ? 1.0 : 0.0, ">=", 1.0);
    r.expect("velocity_sup", res.state.u.sup_norm(), "<=", 1e-8);
    return r;
}

CriterionResult residuals(std::uint64_t seed) {
    CriterionResult r{9, "PDE residual order", {}, {}};
    const GridSpec g(2, 32, kTwoPi);
    const Field u0 = hmf_data(g, 0.3, seed);
    const auto [v0, d0] = coupled_data(g, 0.3, seed);
    std::array<double, 3> prev{};
    for (int m : {64, 128, 256}) {
        const SolverConfig cfg{g, TimeLadder(0.25, m)};
        const auto h = hmflow::solve_hmf(u0, cfg);
        const auto l = lcflow::solve_lc(v0, d0, cfg);
        const std::string tag = "_m" + std::to_string(m);
        r.expect("hmf_converged" + tag, h.converged ? 1.0 : 0.0, ">=", 1.0);
        r.expect("lc_converged" + tag, l.converged ? 1.0 : 0.0, ">=", 1.0);
        const std::array<double, 3> cur{h.residual_norm, l.residual_u, l.residual_d};
        const std::array<std::string, 3> names{"hmf", "lc_velocity", "lc_director"};
        for (int i = 0; i < 3; ++i) {
            r.report.emplace_back(names[i] + "_residual" + tag, cur[i]);
            if (prev[i] > 0.0) r.expect(names[i] + "_order" + tag, std::log2(prev[i] / cur[i]), ">=", 0.9);
        }
        prev = cur;
    }
    return r;
}

}  // namespace

bool CriterionResult::passed() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

void CriterionResult::expect(std::string name, double value, std::string relation, double bound) {
    bool ok = false;
    if (relation == "<=") {
        ok = value <= bound;
    } else if (relation == "<") {
        ok = value < bound;
    } else if (relation == ">=") {
        ok = value >= bound;
    } else {
        throw std::invalid_argument("unknown relation " + relation);
    }
    checks.push_back({std::move(name), value, std::move(relation), bound, ok});
}

CriterionResult verify_criterion(int id, std::uint64_t seed) {
    switch (id) {
        case 1: return spectral_backbone(seed);
        case 2: return operator_bounds(seed);
        case 3: return bmo_carleson(seed);
        case 4: return circle_oracle(seed);
        case 5: return constraint(seed);
        case 6: return contraction(seed);
        case 7: return taylor_green(seed);
        case 8: return gradient_forcing(seed);
        case 9: return residuals(seed);
    }
    throw std::invalid_argument("criterion id must be 1.." + std::to_string(kCriterionCount));
}

std::vector<CriterionResult> run_verify_suite(std::uint64_t seed) {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= kCriterionCount; ++id) out.push_back(verify_criterion(id, seed));
    return out;
}

}  // namespace geoflow::app
