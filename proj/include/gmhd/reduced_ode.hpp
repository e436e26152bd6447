#pragma once

// Low-dimensional models along a single trajectory, integrated independently
// of the PDE solver:
//
//   z' = w^2/2 - z^2/2 - c2,  w' = -w z        (lambda = -1/2, kappa = 0)
//
// the Riccati lower bound z <= m0 / (1 + m0 t / 2), and the lambda = kappa = 1
// comparison between the MHD system and its b = 0 (Euler) companion.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gmhd/dynamics.hpp"
#include "gmhd/presets.hpp"

namespace gmhd {

struct TrajectoryODEState {
    double t = 0.0;
    double z = 0.0;
    double w = 0.0;
    double c2 = 0.0;
};

struct SuppressionPoint {
    double t = 0.0;
    double z = 0.0;
    double w = 0.0;
    double W = 0.0;         // w0 w + (w0 / w)(1 + z^2); 0 when w0 = 0
    double envelope = 0.0;  // W(0) exp((1 - E0) t)
    double int_z = 0.0;     // int_0^t z
};

struct SuppressionSeries {
    double z0 = 0.0, w0 = 0.0, c2 = 0.0;
    std::vector<SuppressionPoint> points;
    std::optional<double> blowup_time;  // |z| passed 1e6 (only possible for w0 = 0)
    double max_envelope_excess = 0.0;   // max (W - envelope)/envelope, clipped at 0
    double max_w_identity_error = 0.0;  // max |w - w0 exp(-int z)| / w0
};

/// RK4 with step dt, sampling every `sample_every`. Throws
/// IntegrationFault if w started positive and reaches <= 0, and
/// PreconditionFault for w0 < 0 or c2 < 0.
SuppressionSeries integrate_suppression(double z0, double w0, double c2, double horizon,
                                        double dt = 1e-4, double sample_every = 1e-2);

struct RiccatiCheck {
    double T = 0.0;  // -2/m0
    std::vector<double> residual;
    double max_residual = 0.0;
};

/// Residual max(0, (1/m0)(1 + m0 t/2) - 1/z(t)) per (t, z) sample. Throws
/// PreconditionFault for m0 >= 0 and DomainFault if z is not negative.
RiccatiCheck riccati_bound_check(const std::vector<std::pair<double, double>>& tz, double m0);

enum class ComparisonVerdict { Held, HypothesisFailed, HypothesesUnmet };
std::string to_string(ComparisonVerdict v);

struct ComparisonPoint {
    double t = 0.0;
    double ux0 = 0.0;    // u_x(0,t)
    double Ux0 = 0.0;    // U_x(0,t)
    double sigma = 0.0;  // ux0 - Ux0
    double margin = 0.0; // |U_x|^2 - |u_x|^2 + |b_x|^2
};

struct ComparisonResult {
    ComparisonVerdict verdict = ComparisonVerdict::Held;
    std::string detail;
    std::optional<double> first_violation_t;
    std::vector<ComparisonPoint> series;
    double min_sigma = 0.0;
    double t_end = 0.0;
    std::size_t steps = 0;
};

struct ComparisonSetup {
    Preset u0;
    Preset b0;
    Preset U0;
    std::size_t n = 512;
    double horizon = 1.5;
    StepControl control;
};

/// Initial hypotheses: b0'(0) = 0, u0'(0) >= U0'(0) and
/// |U0'|^2 >= |u0'|^2 - |b0'|^2. Empty string when they hold.
std::string comparison_hypotheses(const ComparisonSetup& setup);

/// Runs the lambda = kappa = 1 Dirichlet system and its b = 0 companion in
/// lockstep, checking the running hypothesis each step. A violation ends the
/// run with HypothesisFailed.
ComparisonResult comparison_scenario(const ComparisonSetup& setup);

}  // namespace gmhd
