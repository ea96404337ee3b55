#include <gtest/gtest.h>

#include <cmath>

#include "geoflow/data.hpp"
#include "geoflow/norms.hpp"
#include "geoflow/spectral.hpp"
#include "support/oracles.hpp"

using namespace geoflow;
using oracle::kPi;

TEST(Data, SphereFamiliesAreUnitNorm) {
    for (int dim : {1, 2, 3}) {
        const GridSpec g(dim, dim == 3 ? 8 : 32, 2.0 * kPi);
        for (const auto& fam : data::sphere_families()) {
            data::FamilyParams p;
            p.alpha = 0.7;
            const Field u = data::sphere_data(fam, p, g, 42);
            for (std::size_t s = 0; s < g.sites(); ++s) {
                double sq = 0.0;
                for (double v : u.at(s)) sq += v * v;
                EXPECT_NEAR(std::sqrt(sq), 1.0, 1e-12) << fam;
            }
        }
    }
}

TEST(Data, ZeroAmplitudeAngleIsConstant) {
    const GridSpec g(2, 16, 1.0);
    data::FamilyParams p;
    p.alpha = 0.0;
    const Field u = data::sphere_data("angle_modes", p, g, 9);
    for (std::size_t s = 0; s < g.sites(); ++s) {
        EXPECT_EQ(u(s, 0), 1.0);
        EXPECT_EQ(u(s, 1), 0.0);
        EXPECT_EQ(u(s, 2), 0.0);
    }
}

TEST(Data, StreamVelocityIsDivergenceFree) {
    for (int dim : {2, 3}) {
        const GridSpec g(dim, 16, 2.0 * kPi);
        data::FamilyParams p;
        p.alpha = 1.0;
        const Field u = data::velocity_data("stream", p, g, 5);
        EXPECT_GT(u.sup_norm(), 0.1);
        EXPECT_LE(spectral::divergence(u).sup_norm(), 1e-12);
        const Field tg = data::velocity_data("taylor_green", p, g, 0);
        EXPECT_LE(spectral::divergence(tg).sup_norm(), 1e-12);
    }
}

TEST(Data, SeedDeterminesField) {
    const GridSpec g(2, 16, 1.0);
    data::FamilyParams p;
    const Field a = data::sphere_data("angle_modes", p, g, 77);
    const Field b = data::sphere_data("angle_modes", p, g, 77);
    const Field c = data::sphere_data("angle_modes", p, g, 78);
    EXPECT_EQ(oracle::max_abs_diff(a, b), 0.0);
    EXPECT_GT(oracle::max_abs_diff(a, c), 0.0);
}

TEST(Data, OscillatoryFamilyKeepsBmoWhileBmoInverseShrinks) {
    // [sin(K x)]_BMO is dilation invariant, so it stays put as K grows while the
    // sup norm is fixed; the caloric (BMO^-1 type) size decays like 1/K.
    const GridSpec g(1, 256, 2.0 * kPi);
    const double R = g.period() / 4.0;
    const TimeLadder ladder(R * R, 1024);
    double bmo_first = 0.0;
    double literal_first = 0.0;
    double prev_inv = 1e300;
    for (int k : {1, 2, 4, 8, 16}) {
        data::FamilyParams p;
        p.alpha = 1.0;
        p.wavenumber = k;
        const Field theta = data::angle_field("oscillatory", p, g, 0);
        EXPECT_NEAR(theta.sup_norm(), 1.0, 1e-3);
        const auto bmo = norms::bmo_seminorm(theta, R);
        const double mean_osc = bmo.term("mean_oscillation").value;
        if (k == 1) bmo_first = mean_osc;
        EXPECT_NEAR(mean_osc / bmo_first, 1.0, 0.1) << "K = " << k;
        if (k == 1) literal_first = bmo.value;
        EXPECT_LE(bmo.value, 1.25 * literal_first);
        const double inv = norms::bmo_inv_norm(theta, R, ladder).value;
        EXPECT_LT(inv, prev_inv) << "K = " << k;
        if (k > 1) EXPECT_LT(inv, 0.6 * prev_inv);
        prev_inv = inv;
    }
}

TEST(Data, UnknownFamilyRejected) {
    const GridSpec g(2, 16, 1.0);
    EXPECT_THROW(data::sphere_data("spiral", {}, g, 0), std::invalid_argument);
    EXPECT_THROW(data::velocity_data("vortex", {}, g, 0), std::invalid_argument);
    EXPECT_THROW(data::velocity_data("stream", {}, GridSpec(1, 16, 1.0), 0), std::invalid_argument);
}
