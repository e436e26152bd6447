#pragma once

// Semi-analytic solution of the kappa = -lambda regime. With
//
//   J(a,tau)   = 1 - lambda tau u0'(a)
//   Lbar_i     = int_0^1 J^-(i + 1/lambda) da
//   dtau/dt    = Lbar_0^(-2 lambda)
//
// the Jacobian is gamma_a = J^(-1/lambda) / Lbar_0 and w(a,t) = Lbar_0^lambda J.
// Blowup happens when tau reaches tau* = 1/(lambda u0'_ext), at
// t* = int_0^tau* Lbar_0^(2 lambda) dmu (possibly infinite).
//
// Also the lambda = kappa = 0 solution, which is explicit in t.

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "gmhd/presets.hpp"

namespace gmhd {

class ClosedFormContext {
public:
    /// Throws ConfigFault for lambda = 0, data with u0(0) != u0(1), or a
    /// slope that never makes J vanish (tau* infinite).
    ClosedFormContext(double lambda, Preset u0);

    double lambda() const noexcept { return lambda_; }
    const Preset& u0() const noexcept { return u0_; }
    double M0() const noexcept { return M0_; }
    double m0() const noexcept { return m0_; }
    double tau_star() const noexcept { return tau_star_; }
    /// u0'_ext: M0 for lambda > 0, m0 for lambda < 0.
    double slope_ext() const noexcept { return ext_; }
    /// Labels where u0' attains slope_ext (where J first vanishes).
    const std::vector<double>& singular_labels() const noexcept { return singular_; }
    /// True when u0 is x(1-x), enabling the explicit formulas.
    bool quadratic() const noexcept { return quadratic_; }

    /// u0'(alpha) - slope_ext, by Taylor expansion near the singular labels.
    double slope_gap(double alpha) const;
    double J(double alpha, double tau) const;

    /// int_0^1 f(alpha, J, u0'(alpha) - slope_ext) dalpha, split and graded
    /// toward the singular labels. J and the slope difference are evaluated
    /// without cancellation near those labels.
    double integrate(double tau, const std::function<double(double, double, double)>& f,
                     double rel_tol = 1e-11) const;
    /// Same at tau = tau* - gap; resolves J near tau* without cancellation.
    double integrate_gap(double gap, const std::function<double(double, double, double)>& f,
                         double rel_tol = 1e-11) const;

private:
    // Taylor expansion of u0'(s + h) - u0'(s) in h
    double taylor_gap(double s, double h) const;

    double lambda_;
    Preset u0_;
    double M0_ = 0.0, m0_ = 0.0, ext_ = 0.0, tau_star_ = 0.0;
    std::vector<double> singular_;
    bool quadratic_ = false;
};

/// Lbar_i(tau) by adaptive Gauss-Kronrod, i in {0,1}. DomainFault unless
/// 0 <= tau < tau*.
double Lbar(int i, double tau, const ClosedFormContext& ctx);

/// Explicit Lbar_0 and Lbar_1 for u0 = x(1-x), valid for 0 <= tau < 1/|lambda|.
double Lbar0_quadratic(double tau, double lambda);
double Lbar1_quadratic(double tau, double lambda);

/// gamma_a(0, tau) for u0 = x(1-x), lambda > 0: (1 - lambda tau)^(-1/lambda) / Lbar_0.
double jac_origin_quadratic(double tau, double lambda);

/// t(tau) = int_0^tau Lbar_0^(2 lambda) dmu by nested adaptive quadrature.
double t_of_tau(double tau, const ClosedFormContext& ctx);

/// Tabulated t(tau) on tau_j = tau*(1 - 2^(-j/4)), j = 0..nodes, with exact
/// evaluation between nodes and the inverse by monotone cubic interpolation
/// polished with Newton steps.
class TauMap {
public:
    explicit TauMap(const ClosedFormContext& ctx, std::size_t nodes = 200);

    double t_of_tau(double tau) const;
    /// DomainFault for t < 0 or t beyond the last tabulated time.
    double tau_of_t(double t) const;
    double t_max() const noexcept { return t_.back(); }
    const std::vector<double>& taus() const noexcept { return tau_; }
    const std::vector<double>& times() const noexcept { return t_; }

private:
    const ClosedFormContext* ctx_;
    std::vector<double> tau_;
    std::vector<double> t_;
    std::vector<double> d_;  // PCHIP derivatives of tau(t)
};

enum class TstarKind { Finite, Infinite, Indeterminate };
std::string to_string(TstarKind k);

struct TstarResult {
    TstarKind kind = TstarKind::Indeterminate;
    double value = std::numeric_limits<double>::quiet_NaN();  // +inf when Infinite
    double partial = 0.0;  // sum of the octave integrals
    double ratio = 0.0;    // last octave ratio
    int octaves = 0;
};

/// t* by octaves mu_k = tau*(1 - 2^-k), k < 48. Quadratic data is classified
/// by the known tail exponents (finite iff lambda > 1/2 or lambda < 0);
/// otherwise by a three-octave ratio test with an Indeterminate band.
TstarResult tstar(const ClosedFormContext& ctx);

/// u_x(gamma(alpha0,t),t) and gamma_a(alpha0,t) at auxiliary time tau.
double ux_along(double alpha0, double tau, const ClosedFormContext& ctx);
double jac_along(double alpha0, double tau, const ClosedFormContext& ctx);
/// w(alpha,t) = Lbar_0^lambda J.
double omega_solution(double alpha, double tau, const ClosedFormContext& ctx);
/// |u_x|^2 = int ux_along^2 jac_along dalpha.
double ux_norm_sq(double tau, const ClosedFormContext& ctx);

struct ZeroParamsValue {
    double jac = 1.0;
    double ux = 0.0;
};

/// lambda = kappa = 0: gamma_a = e^{t u0'} / int e^{t u0'},
/// u_x = u0' - int u0' e^{t u0'} / int e^{t u0'}.
ZeroParamsValue zero_params_solution(const Preset& u0, double alpha, double t);

/// int_0^1 u0' e^{t u0'} da, an upper bound on u0'(alpha) - u_x in the
/// lambda = kappa = 0 solution.
double zero_params_bound(const Preset& u0, double t);

}  // namespace gmhd
