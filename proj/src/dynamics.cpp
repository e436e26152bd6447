#include "gmhd/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace gmhd {

namespace {

constexpr double kTagEps = 1e-12;

bool near(double a, double b) { return std::abs(a - b) <= kTagEps; }

double squared_norm(const Field& f) { return quadrature(hadamard(f, f)); }

double nonlocal_term(const Field& omega, const Field& bx, const Params& p) {
    return (p.lambda + p.kappa) * squared_norm(bx) - (p.lambda + 1.0) * squared_norm(omega);
}

// Stage state y + c*k with its velocity.
FieldState stage(const FieldState& s, const Tendency& k, double c, double t) {
    Field omega = s.omega + c * k.domega;
    Field b = s.b + c * k.db;
    Field u = velocity(omega);
    return FieldState{t, std::move(omega), std::move(b), std::move(u)};
}

}  // namespace

void Params::validate() const {
    if (!std::isfinite(lambda) || !std::isfinite(kappa)) {
        throw ConfigFault("lambda and kappa must be finite");
    }
}

bool Params::concavity_regime() const noexcept {
    return lambda >= -1.0 && lambda < 0.0 && kappa <= -lambda + kTagEps;
}
bool Params::energy_regime() const noexcept { return near(lambda, -0.5) && kappa <= 0.5 + kTagEps; }
bool Params::euler_reduced_regime() const noexcept {
    return near(kappa, -lambda) && !near(lambda, 0.0);
}
bool Params::suppression_regime() const noexcept { return near(lambda, -0.5) && near(kappa, 0.0); }
bool Params::trivial_regime() const noexcept { return near(lambda, 0.0) && near(kappa, 0.0); }

bool dealias_enabled(DealiasMode mode, const GridSpec& grid) noexcept {
    if (!grid.periodic()) return false;
    switch (mode) {
        case DealiasMode::On: return true;
        case DealiasMode::Off: return false;
        default: return grid.n() < 512;
    }
}

Field velocity(const Field& omega) {
    if (omega.grid().periodic()) return antiderivative(omega);
    Field centered = omega;
    centered += -quadrature(omega);
    Field u = antiderivative(centered);
    u[0] = 0.0;
    u[u.size() - 1] = 0.0;
    return u;
}

FieldState FieldState::make(double t, Field omega, Field b) {
    if (!(omega.grid() == b.grid())) throw ConfigFault("omega and b live on different grids");
    omega.require_finite("initial omega");
    b.require_finite("initial b");
    if (!b.grid().periodic()) {
        const std::size_t last = b.size() - 1;
        const double tol = 1e-12 * std::max(1.0, b.max_abs());
        if (std::abs(b[0]) > tol || std::abs(b[last]) > tol) {
            throw ConfigFault("b does not vanish at the Dirichlet end points");
        }
        b[0] = 0.0;
        b[last] = 0.0;
    }
    Field u = velocity(omega);
    return FieldState{t, std::move(omega), std::move(b), std::move(u)};
}

double energy(const FieldState& s) {
    return squared_norm(s.omega) + squared_norm(derivative(s.b));
}

double compute_I(const FieldState& s, const Params& p) {
    return nonlocal_term(s.omega, derivative(s.b), p);
}

Tendency rhs(const FieldState& s, const Params& p, bool filter) {
    const bool periodic = s.grid().periodic();
    // Periodic fields are projected onto the modes the derivative keeps (or
    // the 2/3 band); otherwise the Nyquist content of w leaks into its mean.
    auto project = [&](Field& f) {
        if (filter) dealias(f);
        else remove_nyquist(f);
    };
    Field w = s.omega;
    Field b = s.b;
    Field u = s.u;
    if (periodic) {
        project(w);
        project(b);
        u = velocity(w);
    }
    const Field wx = derivative(w);
    const Field bx = derivative(b);
    const Field bxx = derivative(b, 2);
    const double I = nonlocal_term(w, bx, p);

    Field dw(s.grid());
    Field db(s.grid());
    for (std::size_t j = 0; j < w.size(); ++j) {
        dw[j] = -u[j] * wx[j] + p.lambda * (w[j] * w[j] - bx[j] * bx[j]) +
                p.kappa * b[j] * bxx[j] + I;
        db[j] = -u[j] * bx[j] + p.kappa * b[j] * w[j];
    }
    if (periodic) {
        project(dw);
        project(db);
    } else {
        db[0] = 0.0;
        db[db.size() - 1] = 0.0;
    }
    return {std::move(dw), std::move(db)};
}

std::pair<Field, Field> vorticity_diagnostic(const FieldState& s) {
    return {derivative(s.omega), derivative(s.b, 2)};
}

StepOutcome step_rk4(const FieldState& s, const Params& p, double dt, bool filter,
                     StageStates* stages) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw PreconditionFault("step_rk4 needs dt > 0");
    try {
        const Tendency k1 = rhs(s, p, filter);
        FieldState s2 = stage(s, k1, 0.5 * dt, s.t + 0.5 * dt);
        const Tendency k2 = rhs(s2, p, filter);
        FieldState s3 = stage(s, k2, 0.5 * dt, s.t + 0.5 * dt);
        const Tendency k3 = rhs(s3, p, filter);
        FieldState s4 = stage(s, k3, dt, s.t + dt);
        const Tendency k4 = rhs(s4, p, filter);

        Field omega = s.omega;
        Field b = s.b;
        const double c = dt / 6.0;
        for (std::size_t j = 0; j < omega.size(); ++j) {
            omega[j] += c * (k1.domega[j] + 2.0 * (k2.domega[j] + k3.domega[j]) + k4.domega[j]);
            b[j] += c * (k1.db[j] + 2.0 * (k2.db[j] + k3.db[j]) + k4.db[j]);
        }
        omega.require_finite("step_rk4 omega");
        b.require_finite("step_rk4 b");
        if (!s.grid().periodic()) {
            b[0] = 0.0;
            b[b.size() - 1] = 0.0;
        }
        const double mean = quadrature(omega);
        omega += -mean;

        if (stages) {
            stages->clear();
            stages->push_back(s);
            stages->push_back(std::move(s2));
            stages->push_back(std::move(s3));
            stages->push_back(std::move(s4));
        }
        Field u = velocity(omega);
        return {FieldState{s.t + dt, std::move(omega), std::move(b), std::move(u)}, mean};
    } catch (const FieldFault& e) {
        throw StepFault(std::string("non-finite state in RK4 step: ") + e.what(), s);
    } catch (const ConsistencyFault& e) {
        throw StepFault(std::string("inconsistent stage in RK4 step: ") + e.what(), s);
    }
}

void StepControl::validate() const {
    if (!(dt_max > 0.0) || !(blowup_threshold > 0.0) || !(dt_floor > 0.0) || !(cfl > 0.0) ||
        !(sample_interval > 0.0) || !(growth_sample_factor > 1.0) || fit_window < 3 ||
        !(resolution_tol > 0.0) || !(roughness_tol > 0.0)) {
        throw ConfigFault("invalid step control");
    }
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::BlowupDetected: return "BlowupDetected";
        case Verdict::StepFloorReached: return "StepFloorReached";
        case Verdict::ResolutionLost: return "ResolutionLost";
        default: return "CompletedHorizon";
    }
}

double i_bound_excess(double I, double E0, const Params& p) {
    if (!near(p.lambda, -0.5)) return 0.0;
    double lo = -0.5 * E0;
    double hi = (p.kappa - 0.5) * E0;
    if (p.kappa < 0.0) std::swap(lo, hi);
    return std::max({0.0, lo - I, I - hi});
}

Integrator::Integrator(FieldState init, Params p, double horizon, StepControl ctrl)
    : state_(std::move(init)), params_(p), horizon_(horizon), ctrl_(ctrl) {
    params_.validate();
    ctrl_.validate();
    if (params_.bc != state_.grid().bc()) {
        throw ConfigFault("boundary condition of params and grid differ");
    }
    if (!(horizon_ > state_.t)) throw ConfigFault("horizon must exceed the initial time");
    dealias_ = dealias_enabled(ctrl_.dealias, state_.grid());
    record_.params = params_;
    record_.control = ctrl_;
    record_.n = state_.grid().n();
    record_.horizon = horizon_;
    record_.E0 = energy(state_);
    record_sample();
}

double Integrator::next_dt() const {
    const double n = static_cast<double>(state_.grid().n());
    const double speed = state_.u.max_abs() * n + state_.omega.max_abs() + state_.b.max_abs() * n;
    double dt = ctrl_.dt_max;
    if (speed > 0.0) dt = std::min(dt, ctrl_.cfl / speed);
    return dt;
}

bool Integrator::step(std::optional<double> requested) {
    if (done_) return false;
    double dt = requested ? *requested : next_dt();
    if (dt < ctrl_.dt_floor) {
        finish(Verdict::StepFloorReached);
        return false;
    }
    const double remaining = horizon_ - state_.t;
    const bool last = dt >= remaining;
    if (last) dt = remaining;

    StageStates stages;
    StepOutcome out = [&] {
        try {
            return step_rk4(state_, params_, dt, dealias_, observer_ ? &stages : nullptr);
        } catch (StepFault& fault) {
            done_ = true;
            fault.attach(record_);
            throw;
        }
    }();
    if (last) out.state.t = horizon_;
    if (observer_) observer_(state_, stages, dt, out.state);
    state_ = std::move(out.state);
    ++record_.steps;
    if (std::abs(out.mean_correction) > 1e-12) {
        record_.mean_corrections.emplace_back(state_.t, out.mean_correction);
    }

    const double sup = state_.omega.max_abs();
    if (last) {
        record_sample();
        finish(Verdict::CompletedHorizon);
    } else if (sup >= ctrl_.blowup_threshold) {
        record_sample();
        finish(Verdict::BlowupDetected);
    } else if ((dealias_ && (spectral_tail(state_.omega) > ctrl_.resolution_tol ||
                             spectral_tail(derivative(state_.b)) > ctrl_.resolution_tol)) ||
               (!state_.grid().periodic() && grid_roughness(state_.omega) > ctrl_.roughness_tol)) {
        record_sample();
        finish(Verdict::ResolutionLost);
    } else if (state_.t >= last_sample_t_ + ctrl_.sample_interval ||
               sup >= ctrl_.growth_sample_factor * last_sample_sup_) {
        record_sample();
    }
    return !done_;
}

void Integrator::record_sample() {
    Sample s;
    s.t = state_.t;
    const Field bx = derivative(state_.b);
    const double w2 = squared_norm(state_.omega);
    const double b2 = squared_norm(bx);
    s.energy = w2 + b2;
    s.I = (params_.lambda + params_.kappa) * b2 - (params_.lambda + 1.0) * w2;
    s.omega_min = state_.omega.min();
    s.omega_max = state_.omega.max();
    s.omega_sup = state_.omega.max_abs();
    s.bx_sup = bx.max_abs();
    s.mean = quadrature(state_.omega);
    s.energy_drift = record_.E0 > 0.0 ? (s.energy - record_.E0) / record_.E0 : 0.0;
    s.i_bound_excess = i_bound_excess(s.I, record_.E0, params_);
    record_.series.push_back(s);
    last_sample_t_ = s.t;
    last_sample_sup_ = s.omega_sup;
}

void Integrator::finish(Verdict v) {
    done_ = true;
    record_.verdict = v;
    if (v == Verdict::BlowupDetected || v == Verdict::ResolutionLost) {
        const Sample& last = record_.series.back();
        record_.blowup_sign = std::abs(last.omega_min) >= std::abs(last.omega_max) ? -1 : 1;
        record_.t_blowup_estimate = extrapolate_blowup(record_.blowup_sign);
    }
}

std::optional<double> Integrator::extrapolate_blowup(int sign) const {
    const auto& series = record_.series;
    std::vector<double> ts, ys;
    for (std::size_t i = series.size(); i-- > 0 && ts.size() < ctrl_.fit_window;) {
        const double ext = sign < 0 ? -series[i].omega_min : series[i].omega_max;
        if (ext <= 0.0) break;
        ts.push_back(series[i].t);
        ys.push_back(1.0 / ext);
    }
    if (ts.size() < 3) return std::nullopt;
    const double m = static_cast<double>(ts.size());
    double st = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        st += ts[i];
        sy += ys[i];
    }
    const double tbar = st / m, ybar = sy / m;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        sxy += (ts[i] - tbar) * (ys[i] - ybar);
        sxx += (ts[i] - tbar) * (ts[i] - tbar);
    }
    if (!(sxx > 0.0)) return std::nullopt;
    const double slope = sxy / sxx;
    if (!(slope < 0.0)) return std::nullopt;
    return tbar - ybar / slope;
}

RunRecord run(const FieldState& init, const Params& p, double horizon, const StepControl& ctrl) {
    Integrator it(init, p, horizon, ctrl);
    while (it.step()) {
    }
    return it.take_record();
}

}  // namespace gmhd
