#pragma once

// Method-of-lines solver for
//
//   w_t = -u w_x + lambda w^2 - lambda b_x^2 + kappa b b_xx + I(t)
//   b_t = -u b_x + kappa b w
//   I(t) = (lambda + kappa) |b_x|^2 - (lambda + 1) |w|^2
//
// with w = u_x, classic RK4 in time and blowup detection on max|w|.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gmhd/errors.hpp"
#include "gmhd/grid.hpp"

namespace gmhd {

struct Params {
    double lambda = 0.0;
    double kappa = 0.0;
    BoundaryCondition bc = BoundaryCondition::Dirichlet;

    void validate() const;

    // -1 <= lambda < 0 and kappa <= -lambda
    bool concavity_regime() const noexcept;
    // lambda = -1/2, kappa <= 1/2
    bool energy_regime() const noexcept;
    // kappa = -lambda, lambda != 0
    bool euler_reduced_regime() const noexcept;
    // (lambda, kappa) = (-1/2, 0)
    bool suppression_regime() const noexcept;
    // (0, 0)
    bool trivial_regime() const noexcept;
};

enum class DealiasMode { Auto, On, Off };

/// Auto enables the 2/3 rule on periodic grids with n < 512.
bool dealias_enabled(DealiasMode mode, const GridSpec& grid) noexcept;

/// u from w. Dirichlet integrates w - quadrature(w), so u vanishes at both
/// end points; periodic uses the spectral antiderivative.
Field velocity(const Field& omega);

struct FieldState {
    double t = 0.0;
    Field omega;
    Field b;
    Field u;

    /// Builds a state and its velocity. Under Dirichlet, b must vanish at the
    /// end points (ConfigFault otherwise); the end values are then set to 0.
    static FieldState make(double t, Field omega, Field b);

    const GridSpec& grid() const noexcept { return omega.grid(); }
};

double energy(const FieldState& s);
double compute_I(const FieldState& s, const Params& p);

struct Tendency {
    Field domega;
    Field db;
};

Tendency rhs(const FieldState& s, const Params& p, bool dealias = false);

/// (w_x, b_xx), post-hoc vorticity/current diagnostics.
std::pair<Field, Field> vorticity_diagnostic(const FieldState& s);

/// The four RK4 stage states (t, t+dt/2, t+dt/2, t+dt).
using StageStates = std::vector<FieldState>;

struct StepOutcome {
    FieldState state;
    double mean_correction = 0.0;  // mean of w removed after the step
};

StepOutcome step_rk4(const FieldState& s, const Params& p, double dt, bool dealias = false,
                     StageStates* stages = nullptr);

struct StepControl {
    double dt_max = 1e-3;
    double blowup_threshold = 1e6;  // M_stop
    double dt_floor = 1e-12;
    double cfl = 0.5;
    double sample_interval = 1e-2;
    double growth_sample_factor = 1.05;
    std::size_t fit_window = 20;
    DealiasMode dealias = DealiasMode::Auto;
    // Dealiased periodic runs stop once spectral_tail of w or b_x exceeds
    // this; the truncated system cannot follow a blowup past that point.
    double resolution_tol = 1e-6;
    // Dirichlet runs stop once grid_roughness of w exceeds this. Resolved
    // blowups stay near 0.03.
    double roughness_tol = 0.1;

    void validate() const;
};

enum class Verdict { CompletedHorizon, BlowupDetected, StepFloorReached, ResolutionLost };
std::string to_string(Verdict v);

struct Sample {
    double t = 0.0;
    double energy = 0.0;
    double I = 0.0;
    double omega_min = 0.0;
    double omega_max = 0.0;
    double omega_sup = 0.0;
    double bx_sup = 0.0;
    double mean = 0.0;           // quadrature of w
    double energy_drift = 0.0;   // (E - E0)/E0, 0 when E0 = 0
    double i_bound_excess = 0.0; // lambda = -1/2 only: violation of the I(t) bounds
};

struct RunRecord {
    Params params;
    StepControl control;
    std::size_t n = 0;
    double horizon = 0.0;
    double E0 = 0.0;
    std::vector<Sample> series;
    Verdict verdict = Verdict::CompletedHorizon;
    std::optional<double> t_blowup_estimate;
    int blowup_sign = 0;  // +1: max w diverged, -1: min w diverged
    std::size_t steps = 0;
    std::vector<std::pair<double, double>> mean_corrections;  // (t, size) above 1e-12
};

/// I(t) bound violation for lambda = -1/2 (0 when satisfied or outside the
/// regime): -E0/2 <= I <= (kappa - 1/2) E0 for kappa >= 0, reversed otherwise.
double i_bound_excess(double I, double E0, const Params& p);

class StepFault : public Fault {
public:
    StepFault(const std::string& what, FieldState pre_step)
        : Fault(what), state_(std::move(pre_step)) {}

    const FieldState& state() const noexcept { return state_; }
    const std::optional<RunRecord>& record() const noexcept { return record_; }
    void attach(RunRecord r) { record_ = std::move(r); }

private:
    FieldState state_;
    std::optional<RunRecord> record_;
};

/// Step-level driver; run() is a loop over step().
class Integrator {
public:
    using Observer = std::function<void(const FieldState& before, const StageStates& stages,
                                        double dt, const FieldState& after)>;

    Integrator(FieldState init, Params p, double horizon, StepControl ctrl = {});

    bool done() const noexcept { return done_; }
    const FieldState& state() const noexcept { return state_; }
    const RunRecord& record() const noexcept { return record_; }
    RunRecord take_record() { return std::move(record_); }
    bool dealias() const noexcept { return dealias_; }

    void set_observer(Observer obs) { observer_ = std::move(obs); }

    /// Step size the controller would take next.
    double next_dt() const;
    /// Advances one step of the controller's size (or the given size, which is
    /// clipped to the remaining horizon). Returns false once finished.
    bool step(std::optional<double> dt = std::nullopt);

    /// Least-squares extrapolation of 1/|w_ext| to zero over the last samples.
    std::optional<double> extrapolate_blowup(int sign) const;

private:
    void record_sample();
    void finish(Verdict v);

    FieldState state_;
    Params params_;
    double horizon_;
    StepControl ctrl_;
    bool dealias_;
    RunRecord record_;
    Observer observer_;
    bool done_ = false;
    double last_sample_t_ = 0.0;
    double last_sample_sup_ = 0.0;
};

RunRecord run(const FieldState& init, const Params& p, double horizon, const StepControl& ctrl = {});

}  // namespace gmhd
