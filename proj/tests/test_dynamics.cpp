#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gmhd/dynamics.hpp"
#include "gmhd/presets.hpp"

using namespace gmhd;

namespace {

FieldState state(const std::string& u0, const std::string& b0, std::size_t n,
                 BoundaryCondition bc = BoundaryCondition::Dirichlet) {
    GridSpec g(n, bc);
    return FieldState::make(0.0, derivative(Preset::parse(u0).on(g)), Preset::parse(b0).on(g));
}

}  // namespace

TEST(Dynamics, ParamsRegimes) {
    EXPECT_TRUE((Params{-1.0, 0.5}).concavity_regime());
    EXPECT_FALSE((Params{-1.0, 1.5}).concavity_regime());
    EXPECT_TRUE((Params{-0.5, 0.5}).energy_regime());
    EXPECT_TRUE((Params{2.0, -2.0}).euler_reduced_regime());
    EXPECT_FALSE((Params{0.0, 0.0}).euler_reduced_regime());
    EXPECT_TRUE((Params{-0.5, 0.0}).suppression_regime());
    EXPECT_TRUE((Params{0.0, 0.0}).trivial_regime());
    EXPECT_THROW((Params{std::nan(""), 0.0}).validate(), ConfigFault);
}

TEST(Dynamics, VelocityVanishesAtDirichletEnds) {
    auto s = state("poly:[0,0.3,0.2,-0.5]", "zero", 129);
    EXPECT_NEAR(s.u[0], 0.0, 1e-15);
    EXPECT_NEAR(s.u[128], 0.0, 1e-15);
}

TEST(Dynamics, MakeRejectsBNonzeroAtWalls) {
    GridSpec g(64, BoundaryCondition::Dirichlet);
    EXPECT_THROW(FieldState::make(0.0, Field(g), Preset::parse("cos:1").on(g)), ConfigFault);
}

TEST(Dynamics, NonlocalTermFormula) {
    auto s = state("quadratic", "bump2:0", 257);
    Params p{1.0, 2.0};
    const double wx = quadrature(hadamard(s.omega, s.omega));
    const Field bx = derivative(s.b);
    const double bxx = quadrature(hadamard(bx, bx));
    EXPECT_NEAR(compute_I(s, p), 3.0 * bxx - 2.0 * wx, 1e-13);
    EXPECT_NEAR(energy(s), wx + bxx, 1e-13);
}

TEST(Dynamics, RhsPreservesZeroMean) {
    auto s = state("sine:2,0.1", "cos:2,0.1,0.1", 128, BoundaryCondition::Periodic);
    auto k = rhs(s, Params{-0.5, 0.25});
    EXPECT_NEAR(quadrature(k.domega), 0.0, 1e-12);
}

TEST(Dynamics, ZeroDataStaysZero) {
    auto rec = run(state("zero", "zero", 64), Params{1.0, -1.0}, 0.2);
    EXPECT_EQ(rec.verdict, Verdict::CompletedHorizon);
    for (const Sample& s : rec.series) {
        EXPECT_EQ(s.energy, 0.0);
        EXPECT_EQ(s.omega_sup, 0.0);
    }
}

TEST(Dynamics, HorizonReachedExactly) {
    auto rec = run(state("quadratic", "zero", 128), Params{0.0, 0.0}, 0.1234);
    EXPECT_EQ(rec.series.back().t, 0.1234);
}

TEST(Dynamics, EnergyConservedAtMinusHalf) {
    auto rec = run(state("quadratic", "bump2:0.5,1", 256), Params{-0.5, 0.3}, 0.5);
    for (const Sample& s : rec.series) {
        EXPECT_LT(std::abs(s.energy_drift), 1e-8);
        EXPECT_EQ(s.i_bound_excess, 0.0);
    }
}

TEST(Dynamics, IBoundExcess) {
    Params p{-0.5, 0.25};
    EXPECT_EQ(i_bound_excess(-0.3, 1.0, p), 0.0);
    EXPECT_GT(i_bound_excess(0.0, 1.0, p), 0.0);   // upper bound (kappa - 1/2) E0 = -1/4
    EXPECT_GT(i_bound_excess(-0.6, 1.0, p), 0.0);  // lower bound -E0/2
    EXPECT_EQ(i_bound_excess(5.0, 1.0, Params{1.0, 1.0}), 0.0);
}

TEST(Dynamics, EulerBlowupTime) {
    auto rec = run(state("quadratic", "zero", 256), Params{1.0, -1.0}, 3.0);
    ASSERT_EQ(rec.verdict, Verdict::BlowupDetected);
    ASSERT_TRUE(rec.t_blowup_estimate);
    EXPECT_NEAR(*rec.t_blowup_estimate, std::numbers::pi * std::numbers::pi / 6.0, 1e-3);
    EXPECT_EQ(rec.blowup_sign, 1);
}

TEST(Dynamics, Deterministic) {
    auto a = run(state("quadratic", "bump2:0", 128), Params{1.0, -1.0}, 0.3);
    auto b = run(state("quadratic", "bump2:0", 128), Params{1.0, -1.0}, 0.3);
    ASSERT_EQ(a.series.size(), b.series.size());
    for (std::size_t i = 0; i < a.series.size(); ++i) EXPECT_EQ(a.series[i].energy, b.series[i].energy);
}

TEST(Dynamics, StepControlValidation) {
    StepControl c;
    c.dt_max = -1.0;
    EXPECT_THROW(c.validate(), ConfigFault);
    EXPECT_THROW(Integrator(state("quadratic", "zero", 64), Params{}, 0.0), ConfigFault);
}

TEST(Dynamics, DealiasAutoRule) {
    EXPECT_TRUE(dealias_enabled(DealiasMode::Auto, GridSpec(256, BoundaryCondition::Periodic)));
    EXPECT_FALSE(dealias_enabled(DealiasMode::Auto, GridSpec(512, BoundaryCondition::Periodic)));
    EXPECT_FALSE(dealias_enabled(DealiasMode::Auto, GridSpec(256, BoundaryCondition::Dirichlet)));
    EXPECT_TRUE(dealias_enabled(DealiasMode::On, GridSpec(512, BoundaryCondition::Periodic)));
}

TEST(Dynamics, StepAcceptsExplicitSize) {
    Integrator it(state("quadratic", "zero", 64), Params{1.0, -1.0}, 1.0);
    it.step(1e-4);
    EXPECT_DOUBLE_EQ(it.state().t, 1e-4);
    EXPECT_THROW(step_rk4(it.state(), Params{}, 0.0), PreconditionFault);
}

TEST(Dynamics, UnresolvedDirichletSpikeStopsAsResolutionLost) {
    // strong b at lambda = 0.75 steepens w below the grid scale well before t*
    RunRecord rec = run(state("quadratic", "bump2:0", 256), Params{0.75, -0.75}, 3.0);
    EXPECT_EQ(rec.verdict, Verdict::ResolutionLost);
    EXPECT_LT(rec.series.back().t, 2.5);
}
