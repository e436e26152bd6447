#include "gmhd/closedform.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gmhd/errors.hpp"

namespace gmhd {

namespace {

using boost::math::quadrature::gauss_kronrod;

constexpr double kTaylorRadius = 3e-4;
constexpr int kGkDepth = 15;

// Boost's adaptive recursion compares an unscaled error estimate with a
// scaled tolerance, so narrow intervals never converge. Integrate on [-1,1].
template <int N, class F>
double gk(F&& f, double a, double b, double tol) {
    if (b <= a) return 0.0;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double err = 0.0;
    return half * gauss_kronrod<double, N>::integrate([&](double s) { return f(mid + half * s); },
                                                      -1.0, 1.0, kGkDepth, tol, &err);
}

template <class F>
double gk31(F&& f, double a, double b, double tol) { return gk<31>(f, a, b, tol); }

template <class F>
double gk15(F&& f, double a, double b, double tol) { return gk<15>(f, a, b, tol); }

bool is_quadratic(const Preset& u0) {
    auto q = [](double x, int k) {
        switch (k) {
            case 0: return x * (1.0 - x);
            case 1: return 1.0 - 2.0 * x;
            case 2: return -2.0;
            default: return 0.0;
        }
    };
    for (double x : {0.0, 0.37, 1.0}) {
        for (int k = 0; k <= Preset::kMaxOrder; ++k) {
            if (std::abs(u0.derivative(x, k) - q(x, k)) > 1e-14) return false;
        }
    }
    return true;
}

double atanhc(double x) { return std::abs(x) < 1e-8 ? 1.0 + x * x / 3.0 : std::atanh(x) / x; }
double sinhc(double y) { return std::abs(y) < 1e-8 ? 1.0 + y * y / 6.0 : std::sinh(y) / y; }

void check_quadratic_domain(double tau, double lambda) {
    if (lambda == 0.0 || !std::isfinite(lambda)) throw DomainFault("lambda must be nonzero");
    if (!(tau >= 0.0) || !(std::abs(lambda) * tau < 1.0)) {
        throw DomainFault("tau outside [0, 1/|lambda|)");
    }
}

}  // namespace

ClosedFormContext::ClosedFormContext(double lambda, Preset u0) : lambda_(lambda), u0_(std::move(u0)) {
    if (lambda_ == 0.0 || !std::isfinite(lambda_)) throw ConfigFault("closed form needs lambda != 0");
    if (std::abs(u0_(1.0) - u0_(0.0)) > 1e-12) {
        throw ConfigFault("closed form needs u0(0) = u0(1) so that u0' has mean zero");
    }
    const Extremum hi = u0_.slope_max();
    const Extremum lo = u0_.slope_min();
    M0_ = hi.value;
    m0_ = lo.value;
    const double sign = lambda_ > 0.0 ? 1.0 : -1.0;
    ext_ = lambda_ > 0.0 ? M0_ : m0_;
    if (!(sign * ext_ > 1e-14)) {
        throw ConfigFault("u0' never makes J vanish; tau* is infinite");
    }

    // every label where u0' attains the extreme value
    auto s = [&](double x) { return sign * u0_.derivative(x, 1); };
    const double tol = 1e-10 * std::max(1.0, std::abs(ext_));
    std::vector<double> cand{lambda_ > 0.0 ? hi.alpha : lo.alpha};
    const int n = 4096;
    for (int i = 0; i <= n; ++i) {
        const double x = static_cast<double>(i) / n;
        const double here = s(x);
        const bool left_ok = i == 0 || here >= s(static_cast<double>(i - 1) / n);
        const bool right_ok = i == n || here >= s(static_cast<double>(i + 1) / n);
        if (!left_ok || !right_ok) continue;
        if (i == 0 || i == n) {
            cand.push_back(x);
            continue;
        }
        double a = static_cast<double>(i - 1) / n, b = static_cast<double>(i + 1) / n, y = x;
        for (int it = 0; it < 60; ++it) {
            const double g = u0_.derivative(y, 2);
            const double gp = u0_.derivative(y, 3);
            if (g == 0.0) break;
            double next = gp != 0.0 ? y - g / gp : 0.5 * (a + b);
            if (!(next > a && next < b)) next = 0.5 * (a + b);
            if (sign * u0_.derivative(next, 2) > 0.0) a = next; else b = next;
            if (std::abs(next - y) < 1e-15) {
                y = next;
                break;
            }
            y = next;
        }
        cand.push_back(y);
    }
    for (double x : cand) {
        if (s(x) < sign * ext_ - tol) continue;
        bool dup = false;
        for (double t : singular_) dup = dup || std::abs(t - x) < 1e-9;
        if (!dup) singular_.push_back(x);
    }
    std::sort(singular_.begin(), singular_.end());
    for (double x : singular_) {
        if (s(x) > sign * ext_) ext_ = u0_.derivative(x, 1);
    }
    tau_star_ = 1.0 / (lambda_ * ext_);
    quadratic_ = is_quadratic(u0_);
}

double ClosedFormContext::slope_gap(double alpha) const {
    double best = 1.0;
    double s = alpha;
    for (double x : singular_) {
        if (std::abs(alpha - x) < best) {
            best = std::abs(alpha - x);
            s = x;
        }
    }
    if (best >= kTaylorRadius) return u0_.derivative(alpha, 1) - ext_;
    return taylor_gap(s, alpha - s) + (u0_.derivative(s, 1) - ext_);
}

double ClosedFormContext::taylor_gap(double s, double h) const {
    double acc = 0.0, hk = 1.0, fact = 1.0;
    for (int k = 1; k + 1 <= Preset::kMaxOrder; ++k) {
        hk *= h;
        fact *= k;
        acc += u0_.derivative(s, k + 1) * hk / fact;
    }
    return acc;
}

double ClosedFormContext::J(double alpha, double tau) const {
    return lambda_ * ext_ * (tau_star_ - tau) - lambda_ * tau * slope_gap(alpha);
}

double ClosedFormContext::integrate(double tau, const std::function<double(double, double, double)>& f,
                                    double rel_tol) const {
    if (!(tau >= 0.0 && tau < tau_star_)) throw DomainFault("tau outside [0, tau*)");
    return integrate_gap(tau_star_ - tau, f, rel_tol);
}

double ClosedFormContext::integrate_gap(double gap, const std::function<double(double, double, double)>& f,
                                        double rel_tol) const {
    if (!(gap > 0.0 && gap <= tau_star_)) throw DomainFault("tau outside [0, tau*)");
    const double tau = tau_star_ - gap;
    const double js = lambda_ * ext_ * gap;

    auto point = [&](double alpha, double gapv) {
        const double J = js - lambda_ * tau * gapv;
        if (!(J > 0.0)) throw DomainFault("J is not positive inside [0, tau*)");
        return f(alpha, J, gapv);
    };
    auto plain = [&](double a, double b) {
        return gk31([&](double x) { return point(x, slope_gap(x)); }, a, b, rel_tol);
    };
    // integral over alpha = s + dir h, h in [0, len], refined geometrically
    // toward h = 0 until J is flat on the innermost piece
    auto graded = [&](double s, double dir, double len) {
        const double base = u0_.derivative(s, 1) - ext_;
        auto at = [&](double h) {
            return h < kTaylorRadius ? base + taylor_gap(s, dir * h)
                                     : u0_.derivative(s + dir * h, 1) - ext_;
        };
        auto g = [&](double h) { return point(s + dir * h, at(h)); };
        // J is only known to about eps |ext| away from the Taylor zone; do
        // not ask for more than that
        auto tol_for = [&](double lo, double hi) {
            if (hi < kTaylorRadius) return rel_tol;
            const double J = js - lambda_ * tau * at(std::max(lo, kTaylorRadius));
            return std::max(rel_tol, 64.0 * 2.2e-16 * std::abs(lambda_ * tau * ext_) / J);
        };
        double total = 0.0;
        double d = len;
        for (int k = 0; k < 400 && d > 1e-300; ++k) {
            const double rise = -lambda_ * tau * at(d);
            if (std::abs(rise) <= 1e-3 * js) break;
            total += gk31(g, 0.25 * d, d, tol_for(0.25 * d, d));
            d *= 0.25;
        }
        return total + gk31(g, 0.0, d, tol_for(0.0, d));
    };

    std::vector<double> pts{0.0};
    for (double s : singular_) {
        if (s > pts.back()) pts.push_back(s);
    }
    if (pts.back() < 1.0) pts.push_back(1.0);
    auto singular = [&](double x) {
        return std::find(singular_.begin(), singular_.end(), x) != singular_.end();
    };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double a = pts[i], b = pts[i + 1];
        const double m = 0.5 * (a + b);
        total += singular(a) ? graded(a, 1.0, m - a) : plain(a, m);
        total += singular(b) ? graded(b, -1.0, b - m) : plain(m, b);
    }
    return total;
}

namespace {

double lbar_gap(int i, double gap, const ClosedFormContext& ctx) {
    const double e = -(i + 1.0 / ctx.lambda());
    return ctx.integrate_gap(gap, [e](double, double J, double) { return std::pow(J, e); }, 1e-13);
}

// integral of Lbar_0^(2 lambda) over tau* - gap in [lo, hi]
double time_between_gaps(double lo, double hi, const ClosedFormContext& ctx) {
    const double p = 2.0 * ctx.lambda();
    return gk15([&](double g) { return std::pow(lbar_gap(0, g, ctx), p); }, lo, hi, 1e-10);
}

struct Moments {
    double L0, L1, KD;  // KD = int J^(-1-1/lambda) (u0' - ext)
};

Moments moments(double tau, const ClosedFormContext& ctx) {
    if (!(tau >= 0.0 && tau < ctx.tau_star())) throw DomainFault("tau outside [0, tau*)");
    const double gap = ctx.tau_star() - tau;
    const double e = -1.0 / ctx.lambda();
    Moments m;
    m.L0 = lbar_gap(0, gap, ctx);
    m.L1 = lbar_gap(1, gap, ctx);
    m.KD = ctx.integrate_gap(gap, [e](double, double J, double d) { return std::pow(J, e - 1.0) * d; },
                             1e-12);
    return m;
}

double ux_from(const Moments& m, double alpha0, double tau, const ClosedFormContext& ctx) {
    const double lam = ctx.lambda();
    return std::pow(m.L0, -2.0 * lam - 1.0) * (ctx.slope_gap(alpha0) * m.L1 - m.KD) /
           ctx.J(alpha0, tau);
}

}  // namespace

double Lbar(int i, double tau, const ClosedFormContext& ctx) {
    if (i != 0 && i != 1) throw PreconditionFault("Lbar index must be 0 or 1");
    if (!(tau >= 0.0 && tau < ctx.tau_star())) throw DomainFault("tau outside [0, tau*)");
    return lbar_gap(i, ctx.tau_star() - tau, ctx);
}

double Lbar0_quadratic(double tau, double lambda) {
    check_quadratic_domain(tau, lambda);
    const double x = lambda * tau;
    const double a = std::atanh(x);
    const double p = 1.0 - 1.0 / lambda;
    return std::exp(0.5 * p * std::log1p(-x * x)) * atanhc(x) * sinhc(p * a);
}

double Lbar1_quadratic(double tau, double lambda) {
    check_quadratic_domain(tau, lambda);
    const double x = lambda * tau;
    const double a = std::atanh(x);
    return std::exp(-0.5 / lambda * std::log1p(-x * x)) * atanhc(x) * sinhc(a / lambda);
}

double jac_origin_quadratic(double tau, double lambda) {
    check_quadratic_domain(tau, lambda);
    return std::pow(1.0 - lambda * tau, -1.0 / lambda) / Lbar0_quadratic(tau, lambda);
}

double t_of_tau(double tau, const ClosedFormContext& ctx) {
    if (!(tau >= 0.0 && tau < ctx.tau_star())) throw DomainFault("tau outside [0, tau*)");
    const double gap = ctx.tau_star() - tau;
    double hi = ctx.tau_star();
    double total = 0.0;
    while (hi > gap) {
        const double lo = std::max(0.5 * hi, gap);
        total += time_between_gaps(lo, hi, ctx);
        hi = lo;
    }
    return total;
}

TauMap::TauMap(const ClosedFormContext& ctx, std::size_t nodes) : ctx_(&ctx) {
    if (nodes < 4) throw ConfigFault("TauMap needs at least 4 nodes");
    const double ts = ctx.tau_star();
    std::vector<double> gaps(nodes + 1);
    for (std::size_t j = 0; j <= nodes; ++j) gaps[j] = ts * std::exp2(-static_cast<double>(j) / 4.0);
    tau_.resize(nodes + 1);
    t_.resize(nodes + 1);
    tau_[0] = 0.0;
    t_[0] = 0.0;
    std::vector<double> slope(nodes + 1);
    slope[0] = 1.0;
    for (std::size_t j = 1; j <= nodes; ++j) {
        tau_[j] = ts - gaps[j];
        t_[j] = t_[j - 1] + time_between_gaps(gaps[j], gaps[j - 1], ctx);
        slope[j] = std::pow(lbar_gap(0, gaps[j], ctx), 2.0 * ctx.lambda());
    }
    // Fritsch-Carlson derivatives of tau(t)
    const std::size_t m = t_.size();
    std::vector<double> delta(m - 1);
    for (std::size_t j = 0; j + 1 < m; ++j) delta[j] = (tau_[j + 1] - tau_[j]) / (t_[j + 1] - t_[j]);
    d_.assign(m, 0.0);
    d_[0] = 1.0 / slope[0];
    d_[m - 1] = 1.0 / slope[m - 1];
    for (std::size_t j = 1; j + 1 < m; ++j) {
        if (delta[j - 1] * delta[j] <= 0.0) continue;
        const double h0 = t_[j] - t_[j - 1], h1 = t_[j + 1] - t_[j];
        const double w1 = 2.0 * h1 + h0, w2 = h1 + 2.0 * h0;
        d_[j] = (w1 + w2) / (w1 / delta[j - 1] + w2 / delta[j]);
    }
    for (std::size_t j : {std::size_t{0}, m - 1}) {
        const double dl = delta[j == 0 ? 0 : m - 2];
        d_[j] = std::clamp(d_[j], 0.0, 3.0 * dl);
    }
}

double TauMap::t_of_tau(double tau) const {
    if (!(tau >= 0.0 && tau < ctx_->tau_star())) throw DomainFault("tau outside [0, tau*)");
    const auto it = std::upper_bound(tau_.begin(), tau_.end(), tau);
    const std::size_t j = static_cast<std::size_t>(it - tau_.begin()) - 1;
    const double ts = ctx_->tau_star();
    return t_[j] + time_between_gaps(ts - tau, ts - tau_[j], *ctx_);
}

double TauMap::tau_of_t(double t) const {
    if (!(t >= 0.0 && t <= t_.back())) throw DomainFault("t outside the tabulated range");
    if (t == 0.0) return 0.0;
    auto it = std::lower_bound(t_.begin(), t_.end(), t);
    std::size_t j = static_cast<std::size_t>(it - t_.begin());
    if (t_[j] == t) return tau_[j];
    --j;
    const double h = t_[j + 1] - t_[j];
    const double s = (t - t_[j]) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
    double lo = tau_[j], hi = tau_[j + 1];
    double x = h00 * tau_[j] + h10 * h * d_[j] + h01 * tau_[j + 1] + h11 * h * d_[j + 1];
    x = std::clamp(x, lo, hi);
    const double ts = ctx_->tau_star();
    const double p = 2.0 * ctx_->lambda();
    for (int iter = 0; iter < 20; ++iter) {
        const double r = t_[j] + time_between_gaps(ts - x, ts - tau_[j], *ctx_) - t;
        if (r > 0.0) hi = x; else lo = x;
        const double next = x - r / std::pow(lbar_gap(0, ts - x, *ctx_), p);
        const double step = (next > lo && next < hi) ? next : 0.5 * (lo + hi);
        if (std::abs(step - x) <= 4e-16 * ts) {
            x = step;
            break;
        }
        x = step;
    }
    return x;
}

std::string to_string(TstarKind k) {
    switch (k) {
        case TstarKind::Finite: return "finite";
        case TstarKind::Infinite: return "infinite";
        case TstarKind::Indeterminate: return "indeterminate";
    }
    return "?";
}

TstarResult tstar(const ClosedFormContext& ctx) {
    constexpr int kOctaves = 48;
    const double ts = ctx.tau_star();
    std::vector<double> c;
    double hi = ts;
    for (int k = 0; k < kOctaves; ++k) {
        c.push_back(time_between_gaps(0.5 * hi, hi, ctx));
        hi *= 0.5;
    }
    TstarResult r;
    r.octaves = kOctaves;
    for (double v : c) r.partial += v;
    const std::size_t n = c.size();
    r.ratio = c[n - 1] / c[n - 2];

    auto finite = [&] {
        r.kind = TstarKind::Finite;
        r.value = r.partial + (r.ratio < 1.0 ? c[n - 1] * r.ratio / (1.0 - r.ratio) : 0.0);
    };
    auto infinite = [&] {
        r.kind = TstarKind::Infinite;
        r.value = std::numeric_limits<double>::infinity();
    };
    if (ctx.quadratic()) {
        const double lam = ctx.lambda();
        if (lam > 0.5 || lam < 0.0) finite(); else infinite();
        return r;
    }
    double rmin = 1e300, rmax = 0.0;
    for (std::size_t k = n - 3; k < n; ++k) {
        const double q = c[k] / c[k - 1];
        rmin = std::min(rmin, q);
        rmax = std::max(rmax, q);
    }
    if (rmax < 0.9) finite();
    else if (rmin >= 0.99) infinite();
    return r;
}

double ux_along(double alpha0, double tau, const ClosedFormContext& ctx) {
    return ux_from(moments(tau, ctx), alpha0, tau, ctx);
}

double jac_along(double alpha0, double tau, const ClosedFormContext& ctx) {
    if (!(tau >= 0.0 && tau < ctx.tau_star())) throw DomainFault("tau outside [0, tau*)");
    return std::pow(ctx.J(alpha0, tau), -1.0 / ctx.lambda()) / Lbar(0, tau, ctx);
}

double omega_solution(double alpha, double tau, const ClosedFormContext& ctx) {
    if (!(tau >= 0.0 && tau < ctx.tau_star())) throw DomainFault("tau outside [0, tau*)");
    return std::pow(Lbar(0, tau, ctx), ctx.lambda()) * ctx.J(alpha, tau);
}

double ux_norm_sq(double tau, const ClosedFormContext& ctx) {
    const Moments m = moments(tau, ctx);
    const double lam = ctx.lambda();
    const double scale = std::pow(m.L0, -2.0 * lam - 1.0);
    return ctx.integrate(
        tau,
        [&](double, double J, double d) {
            const double ux = scale * (d * m.L1 - m.KD) / J;
            return ux * ux * std::pow(J, -1.0 / lam) / m.L0;
        },
        1e-12);
}

namespace {

double weighted_exp_integral(const Preset& u0, double t, double shift, bool with_slope) {
    auto f = [&](double x) {
        const double s = u0.derivative(x, 1);
        const double e = std::exp(t * (s - shift));
        return with_slope ? s * e : e;
    };
    double total = 0.0;
    constexpr int kPieces = 8;
    for (int i = 0; i < kPieces; ++i) {
        total += gk31(f, static_cast<double>(i) / kPieces, static_cast<double>(i + 1) / kPieces, 1e-14);
    }
    return total;
}

}  // namespace

ZeroParamsValue zero_params_solution(const Preset& u0, double alpha, double t) {
    if (!(t >= 0.0)) throw DomainFault("t must be nonnegative");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainFault("label outside [0,1]");
    const double slope = u0.derivative(alpha, 1);
    if (t == 0.0) return {1.0, slope};
    const double shift = u0.slope_max().value;
    const double e = weighted_exp_integral(u0, t, shift, false);
    const double es = weighted_exp_integral(u0, t, shift, true);
    return {std::exp(t * (slope - shift)) / e, slope - es / e};
}

double zero_params_bound(const Preset& u0, double t) {
    if (!(t >= 0.0)) throw DomainFault("t must be nonnegative");
    const double shift = u0.slope_max().value;
    return std::exp(t * shift) * weighted_exp_integral(u0, t, shift, true);
}

}  // namespace gmhd
