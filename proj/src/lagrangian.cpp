#include "gmhd/lagrangian.hpp"

#include <algorithm>
#include <cmath>

namespace gmhd {

namespace {

constexpr double kEscapeTol = 1e-8;

double wrap(double x) {
    double r = x - std::floor(x);
    return r >= 1.0 ? 0.0 : r;
}

bool fixed_label(const TrajectorySet& traj, std::size_t i) {
    return traj.bc == BoundaryCondition::Dirichlet && (traj.alphas[i] == 0.0 || traj.alphas[i] == 1.0);
}

}  // namespace

TrajectorySet TrajectorySet::uniform(BoundaryCondition bc, std::size_t count,
                                     const std::vector<double>& pinned) {
    if (count < 2) throw ConfigFault("need at least two trajectory labels");
    TrajectorySet set;
    set.bc = bc;
    for (std::size_t i = 0; i < count; ++i) {
        set.alphas.push_back(static_cast<double>(i) / static_cast<double>(count - 1));
    }
    set.alphas.back() = 1.0;
    for (double a : pinned) {
        if (!(a >= 0.0 && a <= 1.0)) throw ConfigFault("trajectory label outside [0,1]");
        if (std::find(set.alphas.begin(), set.alphas.end(), a) == set.alphas.end()) {
            set.alphas.push_back(a);
        }
    }
    set.gamma = set.alphas;
    set.logjac.assign(set.alphas.size(), 0.0);
    set.traces.assign(set.alphas.size(), {});
    return set;
}

std::size_t TrajectorySet::index_of(double alpha) const {
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (alphas[i] == alpha) return i;
    }
    throw DomainFault("no trajectory with label " + std::to_string(alpha));
}

double TrajectorySet::position(std::size_t i) const {
    return bc == BoundaryCondition::Periodic ? wrap(gamma[i]) : gamma[i];
}

void advect(TrajectorySet& traj, const StageStates& stages, double dt) {
    if (stages.size() != 4) throw PreconditionFault("advect needs the four RK4 stage states");
    const bool periodic = traj.bc == BoundaryCondition::Periodic;
    std::vector<Sampler> us, ws;
    for (const FieldState& s : stages) {
        us.emplace_back(s.u);
        ws.emplace_back(s.omega);
    }
    auto at = [&](double x) {
        if (periodic) return wrap(x);
        if (x < -kEscapeTol || x > 1.0 + kEscapeTol) {
            throw IntegrationFault("trajectory left [0,1]: x = " + std::to_string(x));
        }
        return std::clamp(x, 0.0, 1.0);
    };
    const double c[4] = {0.0, 0.5 * dt, 0.5 * dt, dt};
    const double w[4] = {1.0, 2.0, 2.0, 1.0};

    for (std::size_t i = 0; i < traj.size(); ++i) {
        const bool fixed = fixed_label(traj, i);
        double g = traj.gamma[i];
        double kprev = 0.0;
        double dg = 0.0, dl = 0.0;
        for (int k = 0; k < 4; ++k) {
            const double x = at(fixed ? g : g + c[k] * kprev);
            const double kg = fixed ? 0.0 : us[k](x);
            dl += w[k] * ws[k](x);
            dg += w[k] * kg;
            kprev = kg;
        }
        if (!fixed) traj.gamma[i] = g + dt / 6.0 * dg;
        traj.logjac[i] += dt / 6.0 * dl;
        if (!periodic) at(traj.gamma[i]);
        if (!std::isfinite(traj.logjac[i]) || !std::isfinite(traj.gamma[i])) {
            throw IntegrationFault("non-finite trajectory state");
        }
    }
    traj.t += dt;
}

namespace {

// Derivatives 0..m_max at x from the nearest kWidth nodes (Dirichlet grids),
// straight from the grid values. Wider stencils lose accuracy where b steepens
// against a wall.
std::vector<double> local_derivatives(const Field& f, double x, int m_max) {
    constexpr long kWidth = 8;
    const long n = static_cast<long>(f.size());
    const double h = f.grid().h();
    const double z = x / h;
    long start = static_cast<long>(std::floor(z)) - kWidth / 2 + 1;
    start = std::clamp(start, 0L, n - kWidth);
    std::vector<double> nodes(kWidth);
    for (long k = 0; k < kWidth; ++k) nodes[k] = static_cast<double>(start + k);
    const auto w = fd_weights(z, nodes, m_max);
    std::vector<double> out(static_cast<std::size_t>(m_max) + 1);
    for (int d = 0; d <= m_max; ++d) {
        double acc = 0.0;
        for (long k = 0; k < kWidth; ++k) acc += w[d][k] * f[static_cast<std::size_t>(start + k)];
        out[d] = acc * std::pow(h, -d);
    }
    return out;
}

}  // namespace

std::vector<std::vector<double>> b_trace_orders(const TrajectorySet& traj, const FieldState& s,
                                                int m_max) {
    if (m_max < 0 || m_max > 4) throw PreconditionFault("b traces support orders 0..4");
    std::vector<std::vector<double>> out(traj.size());
    if (traj.bc == BoundaryCondition::Dirichlet) {
        for (std::size_t i = 0; i < traj.size(); ++i) {
            out[i] = local_derivatives(s.b, std::clamp(traj.position(i), 0.0, 1.0), m_max);
        }
        return out;
    }
    std::vector<Sampler> samplers;
    samplers.emplace_back(s.b);
    for (int k = 1; k <= m_max; ++k) samplers.emplace_back(derivative(s.b, k));
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double x = traj.position(i);
        for (const Sampler& smp : samplers) out[i].push_back(smp(x));
    }
    return out;
}

double jacorder_residual(const TrajectorySet& traj, const FieldState& s, double alpha0, int m,
                         const Params& p, const Preset& b0, std::optional<double> exponent) {
    if (m < 0 || m > 4) throw PreconditionFault("jacorder_residual supports m in 0..4");
    if (b0.zero_order(alpha0) != m) {
        throw PreconditionFault("b0 does not have a zero of order " + std::to_string(m) +
                                " at the given label");
    }
    const std::size_t i = traj.index_of(alpha0);
    const double x = std::clamp(traj.position(i), 0.0, 1.0);
    const double measured = traj.bc == BoundaryCondition::Dirichlet
                                ? local_derivatives(s.b, x, m)[static_cast<std::size_t>(m)]
                                : (m == 0 ? sample(s.b, x) : sample(derivative(s.b, m), x));
    const double e = exponent.value_or(p.kappa - m);
    const double predicted = b0.derivative(alpha0, m) * std::exp(e * traj.logjac[i]);
    const double scale = std::max(std::abs(measured), std::abs(predicted));
    return scale > 0.0 ? std::abs(measured - predicted) / scale : 0.0;
}

double concavity_check(const TrajectorySet& traj, double alpha0, const Params& p, double m0) {
    if (!p.concavity_regime()) {
        throw PreconditionFault("concavity check needs -1 <= lambda < 0 and kappa <= -lambda");
    }
    if (!(m0 < 0.0)) throw PreconditionFault("concavity check needs m0 < 0");
    const std::size_t i = traj.index_of(alpha0);
    const double lhs = std::exp(std::abs(p.lambda) * traj.logjac[i]);
    const double rhs = 1.0 - p.lambda * m0 * traj.t;
    return std::max(0.0, lhs - rhs);
}

std::vector<double> label_jacobian(const TrajectorySet& traj, std::size_t count) {
    if (count < 5 || count > traj.size()) throw PreconditionFault("label_jacobian needs >= 5 labels");
    std::vector<double> out(count);
    std::vector<double> nodes(5);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t start = std::min(i < 2 ? 0 : i - 2, count - 5);
        for (std::size_t k = 0; k < 5; ++k) nodes[k] = traj.alphas[start + k];
        const auto wts = fd_weights(traj.alphas[i], nodes, 1)[1];
        double acc = 0.0;
        for (std::size_t k = 0; k < 5; ++k) acc += wts[k] * traj.gamma[start + k];
        out[i] = acc;
    }
    return out;
}

double label_mean(const TrajectorySet& traj, std::size_t count) {
    if (count < 3 || count % 2 == 0 || count > traj.size()) {
        throw PreconditionFault("label_mean needs an odd number of uniform labels");
    }
    const double h = 1.0 / static_cast<double>(count - 1);
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double wgt = (i == 0 || i == count - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        acc += wgt * std::exp(traj.logjac[i]);
    }
    return acc * h / 3.0;
}

TrackedRun run_tracked(const FieldState& init, const Params& p, double horizon,
                       const StepControl& ctrl, TrajectorySet traj, int m_max) {
    if (traj.bc != init.grid().bc()) throw ConfigFault("trajectory and grid boundary conditions differ");
    traj.t = init.t;
    TrackedRun out;
    Integrator it(init, p, horizon, ctrl);
    it.set_observer([&traj](const FieldState&, const StageStates& stages, double dt,
                            const FieldState&) { advect(traj, stages, dt); });

    auto snapshot = [&](const FieldState& s) {
        traj.traces = b_trace_orders(traj, s, m_max);
        const Sampler w(s.omega);
        std::vector<double> om(traj.size());
        for (std::size_t i = 0; i < traj.size(); ++i) om[i] = w(std::clamp(traj.position(i), 0.0, 1.0));
        out.snapshots.push_back({traj.t, traj.gamma, traj.logjac, std::move(om), traj.traces});
    };
    snapshot(it.state());
    try {
        while (!it.done()) {
            const std::size_t before = it.record().series.size();
            it.step();
            // the integrator may pin t to the horizon on the last step
            traj.t = it.state().t;
            if (it.record().series.size() > before) snapshot(it.state());
        }
        out.record = it.take_record();
    } catch (const StepFault& fault) {
        out.fault = fault.what();
        out.record = fault.record() ? *fault.record() : it.record();
    } catch (const IntegrationFault& fault) {
        out.fault = fault.what();
        out.record = it.record();
    }
    out.final = std::move(traj);
    return out;
}

}  // namespace gmhd
