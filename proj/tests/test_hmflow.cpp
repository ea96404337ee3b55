#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "geoflow/data.hpp"
#include "geoflow/field_ops.hpp"
#include "geoflow/heat.hpp"
#include "geoflow/hmflow.hpp"
#include "geoflow/norms.hpp"
#include "geoflow/spectral.hpp"
#include "geoflow/sphere.hpp"
#include "support/oracles.hpp"

using namespace geoflow;
using hmflow::SolverConfig;
using oracle::kPi;

namespace {

SolverConfig config(const GridSpec& g, double T, int steps) { return SolverConfig{g, TimeLadder(T, steps)}; }

Field angle_map(const Field& theta, int target_dim) {
    Field u(theta.grid(), target_dim);
    for (std::size_t s = 0; s < u.sites(); ++s) {
        u(s, 0) = std::cos(theta(s, 0));
        u(s, 1) = std::sin(theta(s, 0));
    }
    return u;
}

// The flow into a great circle reduces to the heat equation for the angle.
double angle_oracle_error(const SpaceTimeField& u, const Field& theta0) {
    double err = 0.0;
    for (int j = 0; j <= u.steps(); ++j) {
        const Field expect = angle_map(heat::heat_semigroup(theta0, u.ladder().time(j)), u.components());
        err = std::max(err, oracle::max_abs_diff(u.slice(j), expect));
    }
    return err;
}

Field theta_sine(const GridSpec& g, double alpha) {
    return Field::from_function(g, 1, [&](auto x, auto out) { out[0] = alpha * std::sin(2.0 * kPi * x[0] / g.period()); });
}

std::complex<double> dft_mode(const Field& f, int a, int k) {
    const GridSpec& g = f.grid();
    std::complex<double> acc = 0.0;
    for (std::size_t s = 0; s < g.sites(); ++s) {
        const double x = g.position(s)[0];
        acc += f(s, a) * std::exp(std::complex<double>(0.0, -2.0 * kPi * k * x / g.period()));
    }
    return acc / static_cast<double>(g.sites());
}

}  // namespace

TEST(PicardMap, ConstantIsFixedPoint) {
    const GridSpec g(2, 16, 1.0);
    const TimeLadder ladder(0.1, 8);
    Field p(g, 3);
    for (std::size_t s = 0; s < g.sites(); ++s) {
        p(s, 0) = 0.6;
        p(s, 2) = 0.8;
    }
    const SpaceTimeField u = heat::caloric_extension(p, ladder);
    const SpaceTimeField tu = hmflow::picard_map(u, p);
    EXPECT_LE((tu - u).sup_norm(), 1e-15);
}

TEST(PicardMap, FirstIterateMatchesHandQuadratureOnOneMode) {
    const GridSpec g(1, 64, 2.0 * kPi);
    const TimeLadder ladder(0.25, 16);
    const Field u0 = angle_map(theta_sine(g, 0.2), 2);
    const SpaceTimeField ext = heat::caloric_extension(u0, ladder);
    const SpaceTimeField diff = hmflow::picard_map(ext, u0) - ext;
    const sphere::SphereTarget circle(2);
    for (int k : {0, 2, 4}) {
        const double lam = k * k;
        const double w = lam == 0.0 ? ladder.dt() : -std::expm1(-lam * ladder.dt()) / lam;
        std::complex<double> acc = 0.0;
        for (int j = 1; j <= ladder.steps(); ++j) {
            const Field& s = ext.slice(j);
            const Field forcing = sphere::apply_sff_field(circle, s, spectral::gradient(s));
            acc = std::exp(-lam * ladder.dt()) * acc + w * dft_mode(forcing, 0, k);
            EXPECT_NEAR(std::abs(dft_mode(diff.slice(j), 0, k) - acc), 0.0, 1e-12) << "k " << k << " j " << j;
        }
    }
}

TEST(PicardMap, ContractsOnSmallDataBall) {
    const GridSpec g(2, 16, 2.0 * kPi);
    const TimeLadder ladder(0.25, 16);
    data::FamilyParams p;
    p.alpha = 0.1;
    const Field u0 = data::sphere_data("angle_modes", p, g, 7);
    const SpaceTimeField base = heat::caloric_extension(u0, ladder);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        std::vector<Field> pa, pb;
        for (int j = 0; j <= ladder.steps(); ++j) {
            pa.push_back(j == 0 ? Field(g, 3) : 0.02 * oracle::smooth_random(g, 3, seed * 50 + j, 2));
            pb.push_back(j == 0 ? Field(g, 3) : 0.02 * oracle::smooth_random(g, 3, seed * 90 + j, 2));
        }
        const SpaceTimeField u = base + SpaceTimeField(ladder, pa);
        const SpaceTimeField v = base + SpaceTimeField(ladder, pb);
        const double num = norms::x_norm(hmflow::picard_map(u, u0) - hmflow::picard_map(v, u0)).value;
        const double den = norms::x_norm(u - v).value;
        EXPECT_LT(num / den, 1.0);
    }
}

TEST(SolveHmf, ConstantDataConvergesInOneIteration) {
    const GridSpec g(2, 16, 1.0);
    Field p(g, 3);
    for (std::size_t s = 0; s < g.sites(); ++s) p(s, 1) = 1.0;
    const auto res = hmflow::solve_hmf(p, config(g, 0.1, 8));
    EXPECT_TRUE(res.converged);
    EXPECT_EQ(res.increments.size(), 1u);
    EXPECT_LE((res.solution - heat::caloric_extension(p, res.solution.ladder())).sup_norm(), 1e-15);
}

TEST(SolveHmf, RejectsOffSphereData) {
    const GridSpec g(1, 16, 1.0);
    Field p(g, 2);
    for (std::size_t s = 0; s < g.sites(); ++s) p(s, 0) = 1.0 + 1e-9;
    EXPECT_THROW(hmflow::solve_hmf(p, config(g, 0.1, 8)), std::invalid_argument);
}

TEST(SolveHmf, CircleAngleOracleFirstOrderInTime) {
    const GridSpec g(1, 32, 2.0 * kPi);
    const Field theta0 = theta_sine(g, 0.2);
    const Field u0 = angle_map(theta0, 2);
    double prev = 0.0;
    for (int m : {32, 64, 128}) {
        const auto res = hmflow::solve_hmf(u0, config(g, 0.5, m));
        ASSERT_TRUE(res.converged) << res.message;
        const double err = angle_oracle_error(res.solution, theta0);
        EXPECT_LE(err, 5e-3);
        if (prev > 0.0) {
            EXPECT_GT(prev / err, 1.6);
            EXPECT_LT(prev / err, 2.4);
        }
        prev = err;
    }
}

TEST(SolveHmf, GreatCircleDataInTwoDimensions) {
    const GridSpec g(2, 16, 2.0 * kPi);
    data::FamilyParams p;
    p.alpha = 0.15;
    const Field theta0 = data::angle_field("angle_modes", p, g, 3);
    const Field u0 = data::sphere_data("angle_modes", p, g, 3);
    double prev = 0.0;
    for (int m : {16, 32}) {
        const auto res = hmflow::solve_hmf(u0, config(g, 0.25, m));
        ASSERT_TRUE(res.converged) << res.message;
        const double err = angle_oracle_error(res.solution, theta0);
        EXPECT_LE(err, 5e-3);
        if (prev > 0.0) EXPECT_GT(prev / err, 1.6);
        prev = err;
    }
}

TEST(SolveHmf, IncrementsDecayGeometricallyAndFixedPointHolds) {
    const GridSpec g(2, 16, 2.0 * kPi);
    data::FamilyParams p;
    p.alpha = 0.2;
    const Field u0 = data::sphere_data("hedgehog", p, g, 0);
    const auto cfg = config(g, 0.25, 16);
    const auto res = hmflow::solve_hmf(u0, cfg);
    ASSERT_TRUE(res.converged) << res.message;
    for (double r : res.contraction_estimates) EXPECT_LT(r, 1.0);
    EXPECT_LE(res.increments.back(), cfg.picard_tol);
    const double fp = norms::x_norm(hmflow::picard_map(res.solution, u0) - res.solution).value;
    EXPECT_LE(fp, 2.0 * cfg.picard_tol);
}

TEST(SolveHmf, ConstraintHeldWithoutRenormalizationAndImproves) {
    const GridSpec g(2, 16, 2.0 * kPi);
    data::FamilyParams p;
    p.alpha = 0.3;
    const Field u0 = data::sphere_data("hedgehog", p, g, 0);
    double prev = 0.0;
    for (int m : {16, 32, 64}) {
        const auto res = hmflow::solve_hmf(u0, config(g, 0.25, m));
        ASSERT_TRUE(res.converged);
        EXPECT_LE(res.constraint_defect, 1e-3);
        if (prev > 0.0) EXPECT_LT(res.constraint_defect, prev);
        prev = res.constraint_defect;
    }
}

TEST(SolveHmf, DistanceEnergyDecaysAndSubharmonicityResidualShrinks) {
    const GridSpec g(2, 16, 2.0 * kPi);
    data::FamilyParams p;
    p.alpha = 0.3;
    const Field u0 = data::sphere_data("hedgehog", p, g, 0);
    const sphere::SphereTarget target(3);
    double prev_res = 0.0;
    for (int m : {16, 32, 64}) {
        const auto res = hmflow::solve_hmf(u0, config(g, 0.25, m));
        ASSERT_TRUE(res.converged);
        const auto r = sphere::subharmonicity_residual(target, res.solution);
        double interior = 0.0;
        for (int j = 1; j < m; ++j) interior = std::max(interior, r.slice(j).sup_norm());
        if (prev_res > 0.0) EXPECT_LT(interior, prev_res);
        prev_res = interior;
        double last_rho = 0.0;
        for (int j = 0; j <= m; ++j) {
            double rho = 0.0;
            for (std::size_t s = 0; s < g.sites(); ++s) rho = std::max(rho, target.rho(res.solution.slice(j).at(s)));
            if (j > 1) EXPECT_LE(rho, last_rho + 1e-8);
            last_rho = rho;
        }
    }
}

TEST(SolveHmf, ResidualDecreasesAtFirstOrder) {
    const GridSpec g(2, 16, 2.0 * kPi);
    data::FamilyParams p;
    p.alpha = 0.3;
    const Field u0 = data::sphere_data("angle_modes", p, g, 11);
    double prev = 0.0;
    for (int m : {32, 64, 128}) {
        const auto res = hmflow::solve_hmf(u0, config(g, 0.25, m));
        ASSERT_TRUE(res.converged);
        if (prev > 0.0) EXPECT_GE(std::log2(prev / res.residual_norm), 0.9);
        prev = res.residual_norm;
    }
}

TEST(SolveHmf, LargeDataIsReportedNotThrown) {
    const GridSpec g(2, 16, 2.0 * kPi);
    data::FamilyParams p;
    p.alpha = 40.0;
    const Field u0 = data::sphere_data("angle_modes", p, g, 2);
    auto cfg = config(g, 0.5, 16);
    cfg.max_iters = 6;
    const auto res = hmflow::solve_hmf(u0, cfg);
    EXPECT_FALSE(res.converged);
    EXPECT_NE(res.status, hmflow::SolveStatus::converged);
    EXPECT_FALSE(res.message.empty());
}

TEST(TimeMarch, ConstantAndPicardAgreementAtFirstOrder) {
    const GridSpec g(2, 16, 2.0 * kPi);
    Field c(g, 3);
    for (std::size_t s = 0; s < g.sites(); ++s) c(s, 2) = 1.0;
    const auto flat = hmflow::time_march_oracle(c, config(g, 0.1, 8));
    EXPECT_LE(flat.sup_norm() - 1.0, 1e-15);
    for (const auto& s : flat.slices()) EXPECT_LE(oracle::max_abs_diff(s, c), 1e-15);

    data::FamilyParams p;
    p.alpha = 0.3;
    const Field u0 = data::sphere_data("hedgehog", p, g, 0);
    double prev = 0.0;
    for (int m : {16, 32, 64}) {
        const auto cfg = config(g, 0.25, m);
        const auto pic = hmflow::solve_hmf(u0, cfg);
        const auto march = hmflow::time_march_oracle(u0, cfg);
        const double d = (pic.solution - march).sup_norm();
        if (prev > 0.0) {
            EXPECT_GT(prev / d, 1.6);
            EXPECT_LT(prev / d, 2.4);
        }
        prev = d;
    }
}

TEST(TimeMarch, CircleDataFollowsHeatOracle) {
    const GridSpec g(1, 32, 2.0 * kPi);
    const Field theta0 = theta_sine(g, 0.2);
    const auto march = hmflow::time_march_oracle(angle_map(theta0, 2), config(g, 0.5, 128));
    EXPECT_LE(angle_oracle_error(march, theta0), 5e-3);
}

TEST(Sweep, ThresholdMonotoneContractionAndLipschitz) {
    const GridSpec g(2, 16, 2.0 * kPi);
    auto family = [&](double a) {
        data::FamilyParams p;
        p.alpha = a;
        return data::sphere_data("angle_modes", p, g, 5);
    };
    const std::vector<double> alphas{0.0, 0.1, 0.2, 0.4};
    const auto rep = hmflow::wellposedness_sweep(family, alphas, config(g, 0.25, 16));
    ASSERT_EQ(rep.rows.size(), 4u);
    EXPECT_TRUE(rep.rows[0].converged);
    EXPECT_EQ(rep.rows[0].iterations, 1);
    EXPECT_DOUBLE_EQ(rep.threshold, 0.4);
    EXPECT_TRUE(rep.theta_monotone);
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        EXPECT_GT(rep.rows[i].c_ratio, 0.0);
        EXPECT_TRUE(std::isfinite(rep.rows[i].lipschitz));
        EXPECT_GT(rep.rows[i].lipschitz, 0.0);
    }
}
