#include "gmhd/reduced_ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace gmhd {

namespace {

constexpr double kBlowup = 1e6;

// (z, w, int z)
using Vec3 = std::array<double, 3>;

Vec3 suppression_rhs(const Vec3& y, double c2) {
    return {0.5 * y[1] * y[1] - 0.5 * y[0] * y[0] - c2, -y[1] * y[0], y[0]};
}

double norm_sq(const Field& f) { return quadrature(hadamard(f, f)); }

}  // namespace

SuppressionSeries integrate_suppression(double z0, double w0, double c2, double horizon, double dt,
                                        double sample_every) {
    if (!(w0 >= 0.0)) throw PreconditionFault("w0 must be nonnegative");
    if (!(c2 >= 0.0)) throw PreconditionFault("c2 must be nonnegative");
    if (!(dt > 0.0) || !(horizon >= 0.0) || !(sample_every > 0.0)) {
        throw PreconditionFault("need dt > 0, horizon >= 0, sample_every > 0");
    }
    SuppressionSeries out;
    out.z0 = z0;
    out.w0 = w0;
    out.c2 = c2;
    const double E0 = 2.0 * c2;
    auto W = [&](double z, double w) { return w0 > 0.0 ? w0 * w + w0 / w * (1.0 + z * z) : 0.0; };
    const double W0 = W(z0, w0);

    auto push = [&](double t, const Vec3& y) {
        SuppressionPoint p{t, y[0], y[1], W(y[0], y[1]), W0 * std::exp((1.0 - E0) * t), y[2]};
        if (w0 > 0.0) {
            out.max_envelope_excess = std::max(out.max_envelope_excess, (p.W - p.envelope) / p.envelope);
            out.max_w_identity_error =
                std::max(out.max_w_identity_error, std::abs(y[1] - w0 * std::exp(-y[2])) / w0);
        }
        out.points.push_back(p);
    };

    Vec3 y{z0, w0, 0.0};
    push(0.0, y);
    const auto steps = static_cast<long>(std::ceil(horizon / dt - 1e-9));
    const auto stride = std::max<long>(1, std::lround(sample_every / dt));
    double t = 0.0;
    for (long k = 1; k <= steps; ++k) {
        const double h = std::min(dt, horizon - t);
        auto add = [](const Vec3& a, const Vec3& b, double s) {
            return Vec3{a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]};
        };
        const Vec3 k1 = suppression_rhs(y, c2);
        const Vec3 k2 = suppression_rhs(add(y, k1, 0.5 * h), c2);
        const Vec3 k3 = suppression_rhs(add(y, k2, 0.5 * h), c2);
        const Vec3 k4 = suppression_rhs(add(y, k3, h), c2);
        for (int i = 0; i < 3; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        t = k == steps ? horizon : t + h;
        if (w0 > 0.0 && !(y[1] > 0.0)) {
            throw IntegrationFault("w reached " + std::to_string(y[1]) + " at t = " + std::to_string(t) +
                                   "; the step is too large");
        }
        if (!std::isfinite(y[0]) || std::abs(y[0]) > kBlowup) {
            out.blowup_time = t;
            push(t, y);
            return out;
        }
        if (k % stride == 0 || k == steps) push(t, y);
    }
    return out;
}

RiccatiCheck riccati_bound_check(const std::vector<std::pair<double, double>>& tz, double m0) {
    if (!(m0 < 0.0)) throw PreconditionFault("Riccati bound needs m0 < 0");
    RiccatiCheck out;
    out.T = -2.0 / m0;
    for (const auto& [t, z] : tz) {
        if (!(z < 0.0)) {
            throw DomainFault("z is not negative at t = " + std::to_string(t));
        }
        const double r = std::max(0.0, (1.0 + 0.5 * m0 * t) / m0 - 1.0 / z);
        out.residual.push_back(r);
        out.max_residual = std::max(out.max_residual, r);
    }
    return out;
}

std::string to_string(ComparisonVerdict v) {
    switch (v) {
        case ComparisonVerdict::Held: return "held";
        case ComparisonVerdict::HypothesisFailed: return "hypothesis_failed";
        case ComparisonVerdict::HypothesesUnmet: return "hypotheses_unmet";
    }
    return "?";
}

std::string comparison_hypotheses(const ComparisonSetup& setup) {
    const GridSpec grid(setup.n, BoundaryCondition::Dirichlet);
    if (std::abs(setup.b0.derivative(0.0, 1)) > 1e-12) return "b0'(0) != 0";
    if (setup.u0.derivative(0.0, 1) < setup.U0.derivative(0.0, 1) - 1e-12) return "u0'(0) < U0'(0)";
    const double U = norm_sq(derivative(setup.U0.on(grid)));
    const double u = norm_sq(derivative(setup.u0.on(grid)));
    const double b = norm_sq(derivative(setup.b0.on(grid)));
    if (U < u - b - 1e-12) return "|U0'|^2 < |u0'|^2 - |b0'|^2";
    return {};
}

ComparisonResult comparison_scenario(const ComparisonSetup& setup) {
    ComparisonResult out;
    const GridSpec grid(setup.n, BoundaryCondition::Dirichlet);
    setup.u0.validate(BoundaryCondition::Dirichlet, "u0");
    setup.b0.validate(BoundaryCondition::Dirichlet, "b0");
    setup.U0.validate(BoundaryCondition::Dirichlet, "U0");
    if (std::string why = comparison_hypotheses(setup); !why.empty()) {
        out.verdict = ComparisonVerdict::HypothesesUnmet;
        out.detail = why;
        return out;
    }
    const Params p{1.0, 1.0, BoundaryCondition::Dirichlet};
    Integrator mhd(FieldState::make(0.0, derivative(setup.u0.on(grid)), setup.b0.on(grid)), p,
                   setup.horizon, setup.control);
    Integrator euler(FieldState::make(0.0, derivative(setup.U0.on(grid)), Field(grid)), p,
                     setup.horizon, setup.control);

    out.min_sigma = 1e300;
    auto observe = [&]() {
        const FieldState& a = mhd.state();
        const FieldState& e = euler.state();
        ComparisonPoint pt;
        pt.t = a.t;
        pt.ux0 = a.omega[0];
        pt.Ux0 = e.omega[0];
        pt.sigma = pt.ux0 - pt.Ux0;
        pt.margin = norm_sq(e.omega) - norm_sq(a.omega) + norm_sq(derivative(a.b));
        out.min_sigma = std::min(out.min_sigma, pt.sigma);
        out.series.push_back(pt);
        const double scale = std::max(1.0, norm_sq(e.omega));
        return pt.margin >= -1e-10 * scale;
    };
    if (!observe()) {
        out.verdict = ComparisonVerdict::HypothesisFailed;
        out.first_violation_t = 0.0;
        return out;
    }
    while (!mhd.done() && !euler.done()) {
        const double dt = std::min(mhd.next_dt(), euler.next_dt());
        mhd.step(dt);
        euler.step(dt);
        ++out.steps;
        if (!observe()) {
            out.verdict = ComparisonVerdict::HypothesisFailed;
            out.first_violation_t = mhd.state().t;
            out.detail = "running hypothesis failed";
            break;
        }
    }
    out.t_end = mhd.state().t;
    if (out.verdict == ComparisonVerdict::Held && (mhd.done() != euler.done())) {
        out.detail = "one system stopped early";
    }
    return out;
}

}  // namespace gmhd
