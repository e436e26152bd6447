#include <gtest/gtest.h>

#include <cmath>

#include "gmhd/closedform.hpp"
#include "gmhd/lagrangian.hpp"

using namespace gmhd;

namespace {

FieldState state(const std::string& u0, const std::string& b0, std::size_t n,
                 BoundaryCondition bc = BoundaryCondition::Dirichlet) {
    GridSpec g(n, bc);
    return FieldState::make(0.0, derivative(Preset::parse(u0).on(g)), Preset::parse(b0).on(g));
}

}  // namespace

TEST(Lagrangian, UniformLabelsWithPinned) {
    auto t = TrajectorySet::uniform(BoundaryCondition::Dirichlet, 5, {0.3, 0.5});
    EXPECT_EQ(t.size(), 6u);
    EXPECT_EQ(t.index_of(0.3), 5u);
    EXPECT_EQ(t.index_of(0.5), 2u);
    EXPECT_THROW(t.index_of(0.31), DomainFault);
    EXPECT_THROW(TrajectorySet::uniform(BoundaryCondition::Dirichlet, 1), ConfigFault);
    EXPECT_THROW(TrajectorySet::uniform(BoundaryCondition::Dirichlet, 5, {1.5}), ConfigFault);
}

TEST(Lagrangian, ZeroParamsMatchesClosedForm) {
    const auto u0 = Preset::parse("quadratic");
    auto run = run_tracked(state("quadratic", "zero", 256), Params{0.0, 0.0}, 0.5, {},
                           TrajectorySet::uniform(BoundaryCondition::Dirichlet, 17), 0);
    ASSERT_FALSE(run.fault);
    for (std::size_t i = 0; i < 17; ++i) {
        const auto cf = zero_params_solution(u0, run.final.alphas[i], 0.5);
        EXPECT_NEAR(std::exp(run.final.logjac[i]), cf.jac, 1e-8);
        EXPECT_NEAR(run.snapshots.back().omega[i], cf.ux, 1e-7);
    }
}

TEST(Lagrangian, FlowMapConsistency) {
    auto run = run_tracked(state("quadratic", "bump2:0", 256), Params{1.0, -1.0}, 0.8, {},
                           TrajectorySet::uniform(BoundaryCondition::Dirichlet, 65), 2);
    EXPECT_NEAR(label_mean(run.final, 65), 1.0, 1e-6);
    auto fd = label_jacobian(run.final, 65);
    for (std::size_t i = 0; i < 65; ++i) EXPECT_NEAR(fd[i] / std::exp(run.final.logjac[i]), 1.0, 1e-4);
    EXPECT_EQ(run.final.gamma.front(), 0.0);
    EXPECT_EQ(run.final.gamma[64], 1.0);
}

TEST(Lagrangian, JacorderResidual) {
    const auto b0 = Preset::parse("bump2:0");
    const Params p{1.0, 0.5};
    Integrator it(state("quadratic", "bump2:0", 512), p, 0.2);
    auto traj = TrajectorySet::uniform(BoundaryCondition::Dirichlet, 9);
    it.set_observer([&](const FieldState&, const StageStates& st, double dt, const FieldState&) {
        advect(traj, st, dt);
    });
    while (!it.done()) it.step();
    EXPECT_GT(traj.logjac[0], 0.1);
    EXPECT_LT(jacorder_residual(traj, it.state(), 0.0, 2, p, b0), 1e-5);
    // exponent override: the wrong exponent must show up
    EXPECT_GT(jacorder_residual(traj, it.state(), 0.0, 2, p, b0, 0.0), 1e-2);
    EXPECT_THROW(jacorder_residual(traj, it.state(), 0.0, 3, p, b0), PreconditionFault);
}

TEST(Lagrangian, TracesOfOrderTwoZero) {
    auto s = state("quadratic", "bump2:0", 256);
    auto traj = TrajectorySet::uniform(BoundaryCondition::Dirichlet, 5);
    auto tr = b_trace_orders(traj, s, 2);
    EXPECT_NEAR(tr[0][0], 0.0, 1e-14);
    EXPECT_NEAR(tr[0][1], 0.0, 1e-10);
    EXPECT_NEAR(tr[0][2], 2.0, 1e-8);
    EXPECT_THROW(b_trace_orders(traj, s, 5), PreconditionFault);
}

TEST(Lagrangian, ConcavityCheckPreconditions) {
    auto traj = TrajectorySet::uniform(BoundaryCondition::Dirichlet, 5);
    EXPECT_THROW(concavity_check(traj, 1.0, Params{1.0, 0.0}, -1.0), PreconditionFault);
    EXPECT_THROW(concavity_check(traj, 1.0, Params{-1.0, 0.5}, 1.0), PreconditionFault);
    EXPECT_EQ(concavity_check(traj, 1.0, Params{-1.0, 0.5}, -1.0), 0.0);
}

TEST(Lagrangian, PeriodicTrajectoriesWrap) {
    auto run = run_tracked(state("sine:2,0.3", "zero", 128, BoundaryCondition::Periodic),
                           Params{0.0, 0.0, BoundaryCondition::Periodic},
                           0.5, {}, TrajectorySet::uniform(BoundaryCondition::Periodic, 9), 0);
    ASSERT_FALSE(run.fault);
    for (std::size_t i = 0; i < run.final.size(); ++i) {
        const double x = run.final.position(i);
        EXPECT_GE(x, 0.0);
        EXPECT_LT(x, 1.0);
    }
}

TEST(Lagrangian, SnapshotsAlignWithSamples) {
    auto run = run_tracked(state("quadratic", "zero", 128), Params{0.5, -0.5}, 0.3, {},
                           TrajectorySet::uniform(BoundaryCondition::Dirichlet, 5), 1);
    ASSERT_EQ(run.snapshots.size(), run.record.series.size());
    for (std::size_t k = 0; k < run.snapshots.size(); ++k) {
        EXPECT_DOUBLE_EQ(run.snapshots[k].t, run.record.series[k].t);
    }
}
