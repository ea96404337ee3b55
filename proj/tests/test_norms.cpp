#include <gtest/gtest.h>

#include <cmath>

#include "geoflow/field_ops.hpp"
#include "geoflow/heat.hpp"
#include "geoflow/norms.hpp"
#include "geoflow/spectral.hpp"
#include "support/oracles.hpp"

using namespace geoflow;
using oracle::kPi;

namespace {

Field sine1(const GridSpec& g, double amp = 1.0) {
    return Field::from_function(g, 1, [&](auto x, auto out) { out[0] = amp * std::sin(2.0 * kPi * x[0] / g.period()); });
}

std::vector<Field> scalar_slices(const SpaceTimeField& f, auto&& pointwise) {
    std::vector<Field> out;
    for (const auto& s : f.slices()) {
        Field d(s.grid(), 1);
        for (std::size_t i = 0; i < s.sites(); ++i) d(i, 0) = pointwise(s.at(i));
        out.push_back(d);
    }
    return out;
}

double sq(std::span<const double> v) {
    double a = 0.0;
    for (double x : v) a += x * x;
    return a;
}

}  // namespace

TEST(DyadicRadii, AscendingDownToTwoCells) {
    const auto r = norms::dyadic_radii(1.0, 1.0 / 64.0);
    ASSERT_EQ(r.size(), 6u);
    EXPECT_DOUBLE_EQ(r.front(), 1.0 / 32.0);
    EXPECT_DOUBLE_EQ(r.back(), 1.0);
    EXPECT_EQ(norms::dyadic_radii(0.01, 1.0).size(), 1u);
}

TEST(BallStencil, MatchesIndependentEnumeration) {
    const GridSpec g(2, 32, 1.0);
    for (double r : {2.0 / 32, 3.5 / 32, 8.0 / 32}) {
        const auto a = norms::ball_stencil(g, r);
        auto b = oracle::offsets(g, r);
        std::sort(b.begin(), b.end());
        EXPECT_EQ(a, b) << r;
    }
}

TEST(Bmo, ConstantIsZeroAndLargeRadiusRejected) {
    const GridSpec g(2, 16, 1.0);
    Field c(g, 2);
    for (double& v : c.values()) v = 4.0;
    EXPECT_EQ(norms::bmo_seminorm(c, 0.25).value, 0.0);
    EXPECT_THROW(norms::bmo_seminorm(c, 0.26), std::invalid_argument);
    EXPECT_THROW(norms::bmo_seminorm(c, 0.0), std::invalid_argument);
}

TEST(Bmo, HomogeneousOfDegreeOne) {
    const GridSpec g(2, 32, 2.0);
    const Field f = oracle::white_noise(g, 1, 2);
    const double base = norms::bmo_seminorm(f, 0.5).value;
    for (double a : {-3.0, 0.01, 250.0}) {
        const double v = norms::bmo_seminorm(a * f, 0.5).value;
        EXPECT_NEAR(v, std::abs(a) * base, 1e-12 * std::abs(a) * base);
    }
}

TEST(Bmo, SineMatchesExhaustiveEnumeration) {
    const GridSpec g(1, 64, 2.0 * kPi);
    const Field f = sine1(g);
    const double R = g.period() / 4.0;
    const double dyadic = norms::bmo_seminorm(f, R).value;
    const double exhaustive = oracle::brute_force_bmo(f, R);
    EXPECT_NEAR(dyadic, exhaustive, 1e-12 * exhaustive);
}

TEST(Bmo, DyadicWithinFactorOfExhaustive) {
    for (int dim : {1, 2}) {
        const GridSpec g(dim, dim == 1 ? 64 : 16, 1.0);
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            const Field f = oracle::white_noise(g, 1, seed);
            const double dyadic = norms::bmo_seminorm(f, 0.25).value;
            const double full = oracle::brute_force_bmo(f, 0.25);
            EXPECT_LE(dyadic, full * (1.0 + 1e-12));
            EXPECT_GE(dyadic * std::pow(2.0, dim), full);
        }
    }
}

TEST(Bmo, TranslationInvariant) {
    const GridSpec g(2, 16, 1.0);
    const Field f = oracle::white_noise(g, 3, 8);
    const double a = norms::bmo_seminorm(f, 0.25).value;
    const double b = norms::bmo_seminorm(f.shifted({5, -3, 0}), 0.25).value;
    EXPECT_EQ(a, b);
}

TEST(Bmo, MaximizerReproducesValue) {
    const GridSpec g(2, 32, 1.0);
    const Field f = oracle::smooth_random(g, 2, 44);
    const auto rep = norms::bmo_seminorm(f, 0.25);
    const auto ball = std::get<norms::BallSpec>(rep.maximizer);
    EXPECT_NEAR(norms::ball_oscillation(f, ball), rep.value, 1e-12 * rep.value);
    const auto& mean_term = rep.term("mean_oscillation");
    const auto mball = std::get<norms::BallSpec>(mean_term.where);
    EXPECT_NEAR(norms::ball_mean_oscillation(f, mball), mean_term.value, 1e-12 * mean_term.value);
}

TEST(Vmo, ProfileIsMonotoneAndZeroForConstants) {
    const GridSpec g(2, 32, 1.0);
    Field c(g, 1);
    for (double& v : c.values()) v = 1.5;
    for (const auto& [r, v] : norms::vmo_profile(c)) EXPECT_EQ(v, 0.0);
    const auto prof = norms::vmo_profile(oracle::white_noise(g, 1, 4));
    for (std::size_t i = 1; i < prof.size(); ++i) {
        EXPECT_GT(prof[i].first, prof[i - 1].first);
        EXPECT_GE(prof[i].second, prof[i - 1].second);
    }
}

TEST(Vmo, SmoothProfileIsLinearWithGradientSlope) {
    // For sin at small r: r^-1 sum_{|k| <= K} h |k h f'| = |f'| r (1 + 1/K), K = r / h.
    const GridSpec g(1, 512, 2.0 * kPi);
    const auto prof = norms::vmo_profile(sine1(g));
    const double h = g.spacing();
    for (const auto& [r, v] : prof) {
        const double K = std::round(r / h);
        if (K > 16) break;
        EXPECT_NEAR(v / (r * (1.0 + 1.0 / K)), 1.0, 0.02) << "r = " << r;
    }
}

TEST(Carleson, ConstantIsZeroAndHomogeneous) {
    const GridSpec g(2, 16, 2.0 * kPi);
    const TimeLadder ladder(1.0, 16);
    Field c(g, 1);
    for (double& v : c.values()) v = 2.0;
    EXPECT_EQ(norms::carleson_bmo(c, 1.0, ladder).value, 0.0);
    const Field f = oracle::smooth_random(g, 1, 5);
    const double base = norms::carleson_bmo(f, 1.0, ladder).value;
    EXPECT_NEAR(norms::carleson_bmo(-7.0 * f, 1.0, ladder).value, 7.0 * base, 1e-12 * 7.0 * base);
    EXPECT_THROW(norms::carleson_bmo(f, 1.5, ladder), std::invalid_argument);
}

TEST(Carleson, MatchesBruteForceCylinderSums) {
    const GridSpec g(2, 16, 2.0 * kPi);
    const TimeLadder ladder(1.0, 16);
    const Field f = oracle::smooth_random(g, 1, 15);
    const auto rep = norms::carleson_bmo(f, 1.0, ladder);
    const SpaceTimeField ext = heat::caloric_extension(f, ladder);
    std::vector<Field> dens;
    for (const auto& s : ext.slices()) {
        const Field grad = spectral::gradient(s);
        Field d(g, 1);
        for (std::size_t i = 0; i < g.sites(); ++i) d(i, 0) = sq(grad.at(i));
        dens.push_back(d);
    }
    const double oracle_value = std::sqrt(oracle::brute_force_carleson(dens, ladder.dt(), norms::dyadic_radii(1.0, g.spacing())));
    EXPECT_NEAR(rep.value, oracle_value, 1e-12 * oracle_value);
    const auto cyl = std::get<norms::ParabolicCylinder>(rep.maximizer);
    EXPECT_NEAR(std::sqrt(norms::cylinder_average(norms::gradient_density(ext), cyl)), rep.value, 1e-12 * rep.value);
}

TEST(Carleson, TranslationInvariant) {
    const GridSpec g(2, 16, 2.0 * kPi);
    const TimeLadder ladder(1.0, 8);
    const Field f = oracle::white_noise(g, 1, 19);
    const double a = norms::carleson_bmo(f, 1.0, ladder).value;
    const double b = norms::carleson_bmo(f.shifted({2, 7, 0}), 1.0, ladder).value;
    EXPECT_NEAR(a, b, 1e-12 * a);
}

TEST(BmoInverse, ZeroHomogeneousAndBoundedByPrimitive) {
    const GridSpec g(2, 32, 2.0 * kPi);
    const TimeLadder ladder(1.0, 16);
    EXPECT_EQ(norms::bmo_inv_norm(Field(g, 2), 1.0, ladder).value, 0.0);
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const Field gfun = oracle::smooth_random(g, 1, seed);
        const Field grad = spectral::gradient(gfun);
        Field u0(g, 2);
        for (std::size_t s = 0; s < g.sites(); ++s) u0(s, 0) = grad(s, 0);
        const double v = norms::bmo_inv_norm(u0, 1.0, ladder).value;
        EXPECT_NEAR(norms::bmo_inv_norm(3.0 * u0, 1.0, ladder).value, 3.0 * v, 1e-12 * 3.0 * v);
        worst = std::max(worst, v / norms::bmo_seminorm(gfun, 1.0).value);
    }
    EXPECT_TRUE(std::isfinite(worst));
    EXPECT_GT(worst, 0.0);
    RecordProperty("bmo_inverse_over_primitive_bmo", std::to_string(worst));
}

TEST(XNorm, ConstantField) {
    const GridSpec g(2, 16, 2.0 * kPi);
    const TimeLadder ladder(1.0, 8);
    Field c(g, 3);
    for (std::size_t s = 0; s < g.sites(); ++s) c(s, 1) = -0.6;
    const auto rep = norms::x_norm(heat::caloric_extension(c, ladder));
    EXPECT_EQ(norms::x_seminorm(rep), 0.0);
    EXPECT_NEAR(rep.value, 0.6, 1e-15);
}

TEST(XNorm, SineModeGradientTerm) {
    const GridSpec g(1, 32, 2.0 * kPi);
    const TimeLadder ladder(2.0, 40);
    const auto rep = norms::x_norm(heat::caloric_extension(sine1(g, 1.5), ladder));
    double expect = 0.0;
    for (int j = 1; j <= ladder.steps(); ++j) {
        const double t = ladder.time(j);
        expect = std::max(expect, std::sqrt(t) * std::exp(-t) * 1.5);
    }
    EXPECT_NEAR(rep.term("sup_sqrt_t_grad").value, expect, 1e-13);
    EXPECT_NEAR(rep.term("sup_linf").value, 1.5 * std::exp(-ladder.dt()), 1e-13);
    EXPECT_TRUE(std::isfinite(rep.term("carleson_grad").value));
    EXPECT_DOUBLE_EQ(rep.value, rep.term("sup_linf").value + (rep.term("sup_sqrt_t_grad").value + rep.term("carleson_grad").value));
}

TEST(SpaceTimeNorms, TriangleInequality) {
    const GridSpec g(2, 16, 2.0 * kPi);
    const TimeLadder ladder(1.0, 8);
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        std::vector<Field> a, b;
        for (int j = 0; j <= 8; ++j) {
            a.push_back(oracle::white_noise(g, 2, seed * 100 + j));
            b.push_back(oracle::smooth_random(g, 2, seed * 1000 + j));
        }
        const SpaceTimeField fa(ladder, a), fb(ladder, b);
        const double slack = 1.0 + 1e-12;
        EXPECT_LE(norms::x_norm(fa + fb).value, (norms::x_norm(fa).value + norms::x_norm(fb).value) * slack);
        EXPECT_LE(norms::y_norm(fa + fb).value, (norms::y_norm(fa).value + norms::y_norm(fb).value) * slack);
        EXPECT_LE(norms::z_norm(fa + fb).value, (norms::z_norm(fa).value + norms::z_norm(fb).value) * slack);
    }
}

TEST(SpaceTimeNorms, HomogeneousAndTranslationInvariant) {
    const GridSpec g(2, 16, 2.0 * kPi);
    const TimeLadder ladder(1.0, 8);
    std::vector<Field> a, shifted;
    for (int j = 0; j <= 8; ++j) {
        a.push_back(oracle::white_noise(g, 2, 70 + j));
        shifted.push_back(a.back().shifted({3, 1, 0}));
    }
    const SpaceTimeField f(ladder, a), fs(ladder, shifted);
    for (auto norm : {&norms::x_norm, &norms::y_norm, &norms::z_norm}) {
        const double v = norm(f).value;
        EXPECT_NEAR(norm(-2.5 * f).value, 2.5 * v, 1e-12 * 2.5 * v);
        EXPECT_NEAR(norm(fs).value, v, 1e-12 * v);
    }
}

TEST(YNorm, ZeroAndConstantTerms) {
    const GridSpec g(2, 16, 2.0 * kPi);
    const TimeLadder ladder(1.0, 10);
    EXPECT_EQ(norms::y_norm(SpaceTimeField(g, 1, ladder)).value, 0.0);
    const double c = -1.25;
    Field cf(g, 1);
    for (double& v : cf.values()) v = c;
    const auto rep = norms::y_norm(heat::caloric_extension(cf, ladder));
    EXPECT_NEAR(rep.term("sup_t_linf").value, ladder.t_final() * std::abs(c), 1e-15);
    // Cylinder term: r^-n |B_r| h^n |c| t_k over dyadic radii, t_k = R^2 rounded up.
    double cyl = 0.0;
    for (double r : norms::dyadic_radii(norms::max_cylinder_radius(g, ladder), g.spacing())) {
        const double count = static_cast<double>(oracle::offsets(g, r).size());
        const int k = std::max(1, ladder.slice_at_or_after(r * r));
        cyl = std::max(cyl, count * std::pow(g.spacing() / r, 2) * std::abs(c) * ladder.time(k));
    }
    EXPECT_NEAR(rep.term("carleson_l1").value, cyl, 1e-12 * cyl);
    EXPECT_NEAR(rep.value, rep.term("sup_t_linf").value + rep.term("carleson_l1").value, 1e-15);
}

TEST(YNorm, GradientSquareBoundedByXSquareTermwise) {
    const GridSpec g(2, 16, 2.0 * kPi);
    const TimeLadder ladder(1.0, 16);
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const SpaceTimeField u = heat::caloric_extension(oracle::smooth_random(g, 3, seed), ladder);
        const auto x = norms::x_norm(u);
        const auto y = norms::y_norm(norms::gradient_density(u));
        const double a = x.term("sup_sqrt_t_grad").value;
        const double b = x.term("carleson_grad").value;
        EXPECT_LE(y.term("sup_t_linf").value, a * a * (1.0 + 1e-12));
        EXPECT_LE(y.term("carleson_l1").value, b * b * (1.0 + 1e-12));
        EXPECT_LE(y.value, std::pow(x.value, 2));
    }
}

TEST(ZNorm, DivergenceFreeModeClosedForm) {
    const GridSpec g(2, 16, 2.0 * kPi);
    const TimeLadder ladder(1.0, 16);
    EXPECT_EQ(norms::z_norm(SpaceTimeField(g, 2, ladder)).value, 0.0);
    const Field u0 = Field::from_function(g, 2, [](auto x, auto out) {
        out[0] = std::sin(x[1]);
        out[1] = 0.0;
    });
    const auto ext = heat::caloric_extension(u0, ladder);
    const auto rep = norms::z_norm(ext);
    double sup = 0.0;
    for (int j = 1; j <= ladder.steps(); ++j) sup = std::max(sup, std::sqrt(ladder.time(j)) * std::exp(-ladder.time(j)));
    EXPECT_NEAR(rep.term("sup_sqrt_t_linf").value, sup, 1e-13);
    const auto dens = scalar_slices(ext, [](auto v) { return sq(v); });
    const double cyl = std::sqrt(oracle::brute_force_carleson(dens, ladder.dt(), norms::dyadic_radii(1.0, g.spacing())));
    EXPECT_NEAR(rep.term("carleson_l2").value, cyl, 1e-12 * cyl);
    const auto where = std::get<norms::ParabolicCylinder>(rep.maximizer);
    EXPECT_NEAR(std::sqrt(norms::cylinder_average(norms::magnitude_density(ext, 2), where)), rep.term("carleson_l2").value, 1e-12);
}

TEST(ZNorm, CaloricExtensionBoundedByBmoInverse) {
    const GridSpec g(2, 16, 2.0 * kPi);
    const TimeLadder ladder(1.0, 16);
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Field psi = oracle::smooth_random(g, 1, seed);
        const Field grad = spectral::gradient(psi);
        Field u0(g, 2);
        for (std::size_t s = 0; s < g.sites(); ++s) {
            u0(s, 0) = -grad(s, 1);
            u0(s, 1) = grad(s, 0);
        }
        const double z = norms::z_norm(heat::caloric_extension(u0, ladder)).value;
        worst = std::max(worst, z / norms::bmo_inv_norm(u0, 1.0, ladder).value);
    }
    EXPECT_TRUE(std::isfinite(worst));
    RecordProperty("z_over_bmo_inverse", std::to_string(worst));
}

TEST(GradientEstimate, SqrtTGradientBoundedByBmo) {
    const GridSpec g(2, 32, 2.0 * kPi);
    const TimeLadder ladder(1.0, 32);
    double lo = 1e300, hi = 0.0;
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const Field f = oracle::smooth_random(g, 1, seed, 1 + static_cast<int>(seed % 4));
        const double grad = norms::x_norm(heat::caloric_extension(f, ladder)).term("sup_sqrt_t_grad").value;
        const double ratio = grad / norms::bmo_seminorm(f, g.period() / 4.0).value;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    EXPECT_TRUE(std::isfinite(hi));
    EXPECT_LE(hi / lo, 20.0);
}
