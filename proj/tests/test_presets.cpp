#include <gtest/gtest.h>

#include <cmath>

#include "gmhd/errors.hpp"
#include "gmhd/presets.hpp"

using namespace gmhd;

TEST(Presets, QuadraticSlopeExtrema) {
    auto p = Preset::parse("quadratic");
    EXPECT_DOUBLE_EQ(p.derivative(0.3, 1), 1.0 - 0.6);
    auto hi = p.slope_max(), lo = p.slope_min();
    EXPECT_DOUBLE_EQ(hi.value, 1.0);
    EXPECT_DOUBLE_EQ(hi.alpha, 0.0);
    EXPECT_DOUBLE_EQ(lo.value, -1.0);
    EXPECT_DOUBLE_EQ(lo.alpha, 1.0);
}

TEST(Presets, PolyAliasOfQuadratic) {
    auto a = Preset::parse("quadratic"), b = Preset::parse("poly:[0,1,-1]");
    for (double x : {0.0, 0.2, 0.77, 1.0}) {
        for (int k = 0; k <= 3; ++k) EXPECT_DOUBLE_EQ(a.derivative(x, k), b.derivative(x, k));
    }
}

TEST(Presets, Bump2HasOrderTwoZero) {
    auto b = Preset::parse("bump2:0");
    EXPECT_EQ(b.zero_order(0.0), 2);
    EXPECT_NEAR(b.derivative(0.0, 2), 2.0, 1e-14);  // x^2 (1-x)^2
    EXPECT_NEAR(b(0.5), 1.0 / 16.0, 1e-15);
    EXPECT_EQ(Preset::parse("bump2:1,0.5").zero_order(1.0), 2);
    EXPECT_EQ(Preset::parse("bump2:0.4").zero_order(0.4), 2);
}

TEST(Presets, BumpMOrder) {
    for (int m = 1; m <= 4; ++m) {
        auto b = Preset::parse("bump_m:0," + std::to_string(m));
        EXPECT_EQ(b.zero_order(0.0), m);
    }
}

TEST(Presets, SineAndCosine) {
    auto s = Preset::parse("sine:2,0.5");
    EXPECT_NEAR(s(0.125), 0.5 * std::sin(2 * M_PI * 0.125), 1e-15);
    EXPECT_NEAR(s.derivative(0.0, 1), 0.5 * 2 * M_PI, 1e-13);
    auto c = Preset::parse("cos:1,1,2");
    EXPECT_NEAR(c(0.0), 3.0, 1e-15);
    EXPECT_NEAR(c.slope_min().value, -M_PI, 1e-10);
}

TEST(Presets, DenseExtremaRefined) {
    auto p = Preset::parse("poly:[0,0,1,-3,2]");
    auto hi = p.slope_max();
    // u' = 2x - 9x^2 + 8x^3 on [0,1]; interior local max at the smaller root of u'' = 0
    const double r = (18.0 - std::sqrt(18.0 * 18.0 - 4 * 24 * 2)) / 48.0;
    const double at_r = 2 * r - 9 * r * r + 8 * r * r * r;
    EXPECT_NEAR(hi.value, std::max(at_r, 1.0), 1e-12);
}

TEST(Presets, MalformedSpecsRejected) {
    for (const char* bad : {"", "poly:", "poly:[1,", "sine:", "sine:x", "bump_m:0", "bump_m:0,9", "nope"}) {
        EXPECT_THROW(Preset::parse(bad), ConfigFault) << bad;
    }
}

TEST(Presets, BoundaryCompatibility) {
    EXPECT_NO_THROW(Preset::parse("quadratic").validate(BoundaryCondition::Dirichlet, "u0"));
    EXPECT_THROW(Preset::parse("cos:1").validate(BoundaryCondition::Dirichlet, "b0"), ConfigFault);
    EXPECT_NO_THROW(Preset::parse("cos:2").validate(BoundaryCondition::Periodic, "b0"));
    EXPECT_THROW(Preset::parse("quadratic").validate(BoundaryCondition::Periodic, "u0"), ConfigFault);
}

TEST(Presets, OnGridSamplesValues) {
    GridSpec g(33, BoundaryCondition::Dirichlet);
    auto f = Preset::parse("quadratic").on(g);
    EXPECT_DOUBLE_EQ(f[16], 0.25);
    EXPECT_TRUE(Preset::zero().is_zero());
}
