#pragma once

// Lagrangian trajectories gamma(alpha,t) of u, their log-Jacobians
// log gamma_alpha = int_0^t u_x(gamma(alpha,s),s) ds, and traces of b and its
// x-derivatives along them. Trajectories are advanced with the stage states
// of the PDE step so that the coupled system is integrated by one RK4 step.

#include <optional>
#include <vector>

#include "gmhd/dynamics.hpp"
#include "gmhd/presets.hpp"

namespace gmhd {

struct TrajectorySet {
    BoundaryCondition bc = BoundaryCondition::Dirichlet;
    double t = 0.0;
    std::vector<double> alphas;
    std::vector<double> gamma;   // periodic: unwrapped
    std::vector<double> logjac;
    std::vector<std::vector<double>> traces;  // [label][order]

    /// `count` uniform labels including both end points, followed by any
    /// pinned labels not already present.
    static TrajectorySet uniform(BoundaryCondition bc, std::size_t count = 65,
                                 const std::vector<double>& pinned = {});

    std::size_t size() const noexcept { return alphas.size(); }
    /// Index of the label equal to alpha (exact match). Throws DomainFault.
    std::size_t index_of(double alpha) const;
    /// gamma reduced to [0,1) on periodic grids.
    double position(std::size_t i) const;
};

/// One RK4 step of gamma and logjac using the four PDE stage states.
void advect(TrajectorySet& traj, const StageStates& stages, double dt);

/// (b, b_x, ..., d^m b/dx^m) sampled at each gamma, m_max <= 4.
std::vector<std::vector<double>> b_trace_orders(const TrajectorySet& traj, const FieldState& s,
                                                int m_max);

/// |d^m b/dx^m (gamma(alpha0,t)) - b0^(m)(alpha0) exp(e logjac)| relative to
/// the larger magnitude, with e = kappa - m unless `exponent` is given.
/// b0 must have a zero of order exactly m at alpha0 (PreconditionFault).
double jacorder_residual(const TrajectorySet& traj, const FieldState& s, double alpha0, int m,
                         const Params& p, const Preset& b0,
                         std::optional<double> exponent = std::nullopt);

/// max(0, exp(|lambda| logjac(alpha0)) - (1 - lambda m0 t)). Requires the
/// concavity regime and m0 < 0.
double concavity_check(const TrajectorySet& traj, double alpha0, const Params& p, double m0);

/// Fourth-order finite-difference gamma_alpha across the uniform labels
/// (the first `count` entries), for comparison with exp(logjac).
std::vector<double> label_jacobian(const TrajectorySet& traj, std::size_t count);

/// Composite Simpson over the uniform labels of exp(logjac); equals 1 for an
/// exact flow map.
double label_mean(const TrajectorySet& traj, std::size_t count);

struct TrajectorySnapshot {
    double t = 0.0;
    std::vector<double> gamma;
    std::vector<double> logjac;
    std::vector<double> omega;  // u_x at gamma
    std::vector<std::vector<double>> traces;
};

struct TrackedRun {
    RunRecord record;
    std::vector<TrajectorySnapshot> snapshots;  // one per RunRecord sample
    TrajectorySet final;
    std::optional<std::string> fault;  // StepFault message, if the run ended on one
};

/// Runs the PDE and co-integrates the trajectories, snapshotting them with
/// b-traces up to order m_max at every RunRecord sample. A StepFault ends the
/// run and is reported in `fault` with the partial record.
TrackedRun run_tracked(const FieldState& init, const Params& p, double horizon,
                       const StepControl& ctrl, TrajectorySet traj, int m_max = 2);

}  // namespace gmhd
