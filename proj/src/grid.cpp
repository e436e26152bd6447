#include "gmhd/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "gmhd/errors.hpp"

namespace gmhd {

std::string to_string(BoundaryCondition bc) {
    return bc == BoundaryCondition::Periodic ? "periodic" : "dirichlet";
}

BoundaryCondition parse_boundary_condition(const std::string& text) {
    if (text == "periodic" || text == "pbc") return BoundaryCondition::Periodic;
    if (text == "dirichlet" || text == "dbc") return BoundaryCondition::Dirichlet;
    throw ConfigFault("unknown boundary condition '" + text + "'");
}

GridSpec::GridSpec(std::size_t n, BoundaryCondition bc) : n_(n), bc_(bc) {
    if (n < kMinPoints) {
        throw ConfigFault("grid needs at least " + std::to_string(kMinPoints) + " points, got " +
                          std::to_string(n));
    }
    h_ = bc == BoundaryCondition::Periodic ? 1.0 / static_cast<double>(n)
                                           : 1.0 / static_cast<double>(n - 1);
}

std::vector<double> GridSpec::points() const {
    std::vector<double> xs(n_);
    for (std::size_t j = 0; j < n_; ++j) xs[j] = x(j);
    return xs;
}

// ---------------------------------------------------------------------------
// Field

Field::Field(const GridSpec& grid) : grid_(grid), values_(grid.n(), 0.0) {}

Field::Field(const GridSpec& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.n()) {
        throw ConfigFault("field length " + std::to_string(values_.size()) +
                          " does not match grid size " + std::to_string(grid_.n()));
    }
}

double Field::max_abs() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double Field::min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }
double Field::max() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

void Field::require_finite(const char* context) const {
    for (std::size_t j = 0; j < values_.size(); ++j) {
        if (!std::isfinite(values_[j])) {
            throw FieldFault(std::string(context) + ": non-finite value", j);
        }
    }
}

Field& Field::operator+=(const Field& other) {
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
    return *this;
}

Field& Field::operator-=(const Field& other) {
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= other.values_[j];
    return *this;
}

Field& Field::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

Field& Field::operator+=(double s) {
    for (double& v : values_) v += s;
    return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(Field a, double s) { return a *= s; }
Field operator*(double s, Field a) { return a *= s; }

Field hadamard(const Field& a, const Field& b) {
    Field out(a.grid());
    for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] * b[j];
    return out;
}

// ---------------------------------------------------------------------------
// FFT plumbing. Plans are created once per size under a lock and executed
// with the new-array interface, which is thread-safe.

namespace {

struct FftPlans {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    FftPlans get(std::size_t n) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = plans_.find(n);
        if (it != plans_.end()) return it->second;
        const int ni = static_cast<int>(n);
        double* real = fftw_alloc_real(n);
        fftw_complex* spec = fftw_alloc_complex(n / 2 + 1);
        FftPlans p;
        p.forward = fftw_plan_dft_r2c_1d(ni, real, spec, FFTW_ESTIMATE | FFTW_UNALIGNED);
        p.backward = fftw_plan_dft_c2r_1d(ni, spec, real, FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(spec);
        fftw_free(real);
        plans_.emplace(n, p);
        return p;
    }

    ~PlanCache() {
        for (auto& [n, p] : plans_) {
            fftw_destroy_plan(p.forward);
            fftw_destroy_plan(p.backward);
        }
    }

private:
    std::mutex mutex_;
    std::map<std::size_t, FftPlans> plans_;
};

using Spectrum = std::vector<std::complex<double>>;

Spectrum forward_fft(std::span<const double> values) {
    const std::size_t n = values.size();
    const FftPlans p = PlanCache::instance().get(n);
    std::vector<double> in(values.begin(), values.end());
    Spectrum out(n / 2 + 1);
    fftw_execute_dft_r2c(p.forward, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

std::vector<double> inverse_fft(Spectrum spec, std::size_t n) {
    const FftPlans p = PlanCache::instance().get(n);
    std::vector<double> out(n);
    fftw_execute_dft_c2r(p.backward, reinterpret_cast<fftw_complex*>(spec.data()), out.data());
    const double scale = 1.0 / static_cast<double>(n);
    for (double& v : out) v *= scale;
    return out;
}

Field spectral_derivative(const Field& f, int order) {
    const std::size_t n = f.size();
    Spectrum spec = forward_fft(f.values());
    const std::complex<double> i2pi(0.0, 2.0 * std::numbers::pi);
    for (std::size_t k = 0; k < spec.size(); ++k) {
        if (n % 2 == 0 && k == n / 2) {
            spec[k] = 0.0;
            continue;
        }
        spec[k] *= std::pow(i2pi * static_cast<double>(k), order);
    }
    return Field(f.grid(), inverse_fft(std::move(spec), n));
}

int interior_radius(int order) { return (order + 1) / 2 + 2; }

Field fd_derivative(const Field& f, int order) {
    const std::size_t n = f.size();
    const int r = interior_radius(order);
    const int width = order + 6;  // one-sided stencil size for sixth order
    const double scale = std::pow(f.grid().h(), -order);
    Field out(f.grid());

    std::vector<double> centered_nodes;
    for (int k = -r; k <= r; ++k) centered_nodes.push_back(k);
    const auto centered = fd_weights(0.0, centered_nodes, order)[order];

    std::vector<double> nodes(width);
    for (std::size_t j = 0; j < n; ++j) {
        const auto jj = static_cast<long>(j);
        if (jj >= r && jj + r < static_cast<long>(n)) {
            double acc = 0.0;
            for (int k = -r; k <= r; ++k) acc += centered[k + r] * f[j + k];
            out[j] = acc * scale;
            continue;
        }
        const long start = jj < r ? 0 : static_cast<long>(n) - width;
        for (int k = 0; k < width; ++k) nodes[k] = static_cast<double>(start + k);
        const auto w = fd_weights(static_cast<double>(jj), nodes, order)[order];
        double acc = 0.0;
        for (int k = 0; k < width; ++k) acc += w[k] * f[static_cast<std::size_t>(start + k)];
        out[j] = acc * scale;
    }
    return out;
}

std::vector<double> dirichlet_quadrature_weights(std::size_t n, QuadratureRule rule) {
    if (rule == QuadratureRule::Simpson && n % 2 == 0) {
        throw ConfigFault("composite Simpson needs an odd number of points, got " +
                          std::to_string(n));
    }
    std::vector<double> w(n, 0.0);
    // Simpson on points [0, m], m even; 3/8 closure on the last three
    // intervals when n is even.
    const std::size_t m = n % 2 == 1 ? n - 1 : n - 4;
    for (std::size_t k = 0; k + 2 <= m; k += 2) {
        w[k] += 1.0 / 3.0;
        w[k + 1] += 4.0 / 3.0;
        w[k + 2] += 1.0 / 3.0;
    }
    if (n % 2 == 0) {
        w[m] += 3.0 / 8.0;
        w[m + 1] += 9.0 / 8.0;
        w[m + 2] += 9.0 / 8.0;
        w[m + 3] += 3.0 / 8.0;
    }
    return w;
}

}  // namespace

std::vector<std::vector<double>> fd_weights(double z, std::span<const double> nodes,
                                            int max_order) {
    const std::size_t np = nodes.size();
    std::vector<std::vector<double>> c(max_order + 1, std::vector<double>(np, 0.0));
    double c1 = 1.0;
    double c4 = nodes[0] - z;
    c[0][0] = 1.0;
    for (std::size_t i = 1; i < np; ++i) {
        const int mn = std::min(static_cast<int>(i), max_order);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i] - z;
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) {
                    c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for (int k = mn; k >= 1; --k) {
                c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    return c;
}

Field derivative(const Field& f, int order) {
    if (order < 1 || order > 6) throw ConfigFault("derivative order must be in 1..6");
    f.require_finite("derivative");
    return f.grid().periodic() ? spectral_derivative(f, order) : fd_derivative(f, order);
}

double quadrature(const Field& f, QuadratureRule rule) {
    f.require_finite("quadrature");
    const GridSpec& g = f.grid();
    if (g.periodic()) {
        double acc = 0.0;
        for (double v : f.values()) acc += v;
        return acc * g.h();
    }
    const auto w = dirichlet_quadrature_weights(g.n(), rule);
    double acc = 0.0;
    for (std::size_t j = 0; j < g.n(); ++j) acc += w[j] * f[j];
    return acc * g.h();
}

Field antiderivative(const Field& omega) {
    omega.require_finite("antiderivative");
    const GridSpec& g = omega.grid();
    const std::size_t n = g.n();
    const double h = g.h();
    Field u(g);

    if (g.periodic()) {
        const double mean = quadrature(omega);
        if (std::abs(mean) > kMeanTolerance * std::max(1.0, omega.max_abs())) {
            throw ConsistencyFault("antiderivative: periodic omega has mean " +
                                   std::to_string(mean));
        }
        Spectrum spec = forward_fft(omega.values());
        spec[0] = 0.0;
        for (std::size_t k = 1; k < spec.size(); ++k) {
            if (n % 2 == 0 && k == n / 2) {
                spec[k] = 0.0;
            } else {
                spec[k] /= std::complex<double>(0.0, 2.0 * std::numbers::pi * static_cast<double>(k));
            }
        }
        return Field(g, inverse_fft(std::move(spec), n));
    }

    // Cumulative rule built from the same blocks as the quadrature weights,
    // so u at x = 1 equals quadrature(omega).
    const auto& f = omega;
    auto first_cell = [&](std::size_t a) {  // int_{x_a}^{x_{a+1}}, cubic through a..a+3
        return h / 24.0 * (9.0 * f[a] + 19.0 * f[a + 1] - 5.0 * f[a + 2] + f[a + 3]);
    };
    auto mirrored_cell = [&](std::size_t b) {  // int_{x_{b-1}}^{x_b}, cubic through b-3..b
        return h / 24.0 * (9.0 * f[b] + 19.0 * f[b - 1] - 5.0 * f[b - 2] + f[b - 3]);
    };
    const std::size_t m = n % 2 == 1 ? n - 1 : n - 4;
    u[0] = 0.0;
    for (std::size_t k = 0; k + 2 <= m; k += 2) {
        u[k + 2] = u[k] + h / 3.0 * (f[k] + 4.0 * f[k + 1] + f[k + 2]);
        u[k + 1] = (k + 3 < n) ? u[k] + first_cell(k) : u[k + 2] - mirrored_cell(k + 2);
    }
    if (n % 2 == 0) {
        u[m + 1] = u[m] + first_cell(m);
        u[m + 2] = u[m] + h / 3.0 * (f[m] + 4.0 * f[m + 1] + f[m + 2]);
        u[m + 3] = u[m] + 3.0 * h / 8.0 * (f[m] + 3.0 * f[m + 1] + 3.0 * f[m + 2] + f[m + 3]);
    }
    return u;
}

namespace {

void filter_modes(Field& f, std::size_t keep_max) {
    const std::size_t n = f.size();
    Spectrum spec = forward_fft(f.values());
    for (std::size_t k = 0; k < spec.size(); ++k) {
        if (k > keep_max || (n % 2 == 0 && k == n / 2)) spec[k] = 0.0;
    }
    auto values = inverse_fft(std::move(spec), n);
    std::copy(values.begin(), values.end(), f.values().begin());
}

}  // namespace

void dealias(Field& f) {
    if (!f.grid().periodic()) return;
    const std::size_t n = f.size();
    // keep k < n/3 so that quadratic products alias only into discarded modes
    const std::size_t keep = (n % 3 == 0) ? n / 3 - 1 : n / 3;
    filter_modes(f, keep);
}

void remove_nyquist(Field& f) {
    if (!f.grid().periodic()) return;
    filter_modes(f, f.size());
}

double spectral_tail(const Field& f) {
    if (!f.grid().periodic()) throw PreconditionFault("spectral_tail needs a periodic grid");
    const std::size_t n = f.size();
    const Spectrum spec = forward_fft(f.values());
    double total = 0.0, tail = 0.0;
    for (std::size_t k = 1; k < spec.size(); ++k) {
        const double e = std::norm(spec[k]);
        total += e;
        if (4 * k >= n && 3 * k < n) tail += e;
    }
    total += 0.5 * std::norm(spec[0]);
    return total > 0.0 ? std::sqrt(tail / total) : 0.0;
}

double grid_roughness(const Field& f) {
    static constexpr double c[7] = {1.0, -6.0, 15.0, -20.0, 15.0, -6.0, 1.0};
    const std::size_t n = f.size();
    const double scale = f.max_abs();
    if (n < 7 || scale == 0.0) return 0.0;
    double worst = 0.0;
    for (std::size_t j = 0; j + 6 < n; ++j) {
        double d = 0.0;
        for (std::size_t k = 0; k < 7; ++k) d += c[k] * f[j + k];
        worst = std::max(worst, std::abs(d));
    }
    return worst / (64.0 * scale);
}

// ---------------------------------------------------------------------------
// Sampling

Sampler::Sampler(const Field& f)
    : grid_(f.grid()), values_(f.values().begin(), f.values().end()) {
    f.require_finite("sample");
    if (grid_.periodic()) return;

    const std::size_t n = grid_.n();
    const double h = grid_.h();
    const Field slope = derivative(f, 1);
    const double s0 = slope[0];
    const double s1 = slope[n - 1];

    // Clamped spline: tridiagonal system for the second derivatives.
    std::vector<double> diag(n, 4.0), rhs(n);
    diag[0] = 2.0;
    diag[n - 1] = 2.0;
    rhs[0] = 6.0 / h * ((values_[1] - values_[0]) / h - s0);
    rhs[n - 1] = 6.0 / h * (s1 - (values_[n - 1] - values_[n - 2]) / h);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        rhs[i] = 6.0 / (h * h) * (values_[i + 1] - 2.0 * values_[i] + values_[i - 1]);
    }
    // Thomas algorithm, unit off-diagonals.
    for (std::size_t i = 1; i < n; ++i) {
        const double w = 1.0 / diag[i - 1];
        diag[i] -= w;
        rhs[i] -= w * rhs[i - 1];
    }
    second_.assign(n, 0.0);
    second_[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        second_[i] = (rhs[i] - second_[i + 1]) / diag[i];
    }
}

double Sampler::operator()(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainFault("sample: x = " + std::to_string(x) + " outside [0,1]");
    }
    const std::size_t n = grid_.n();
    const double h = grid_.h();
    const double s = x / h;
    const double nearest = std::round(s);
    if (std::abs(s - nearest) < 1e-12) {
        const auto j = static_cast<std::size_t>(nearest);
        return values_[grid_.periodic() ? j % n : std::min(j, n - 1)];
    }

    if (grid_.periodic()) {
        const double fl = std::floor(s);
        const double th = s - fl;
        const long j = static_cast<long>(fl);
        auto at = [&](long k) {
            const long ni = static_cast<long>(n);
            return values_[static_cast<std::size_t>(((k % ni) + ni) % ni)];
        };
        // Lagrange cubic on nodes j-1, j, j+1, j+2.
        const double wm = -th * (th - 1.0) * (th - 2.0) / 6.0;
        const double w0 = (th + 1.0) * (th - 1.0) * (th - 2.0) / 2.0;
        const double w1 = -(th + 1.0) * th * (th - 2.0) / 2.0;
        const double w2 = (th + 1.0) * th * (th - 1.0) / 6.0;
        return wm * at(j - 1) + w0 * at(j) + w1 * at(j + 1) + w2 * at(j + 2);
    }

    const std::size_t i = std::min(static_cast<std::size_t>(s), n - 2);
    const double a = grid_.x(i + 1) - x;
    const double b = x - grid_.x(i);
    return second_[i] * a * a * a / (6.0 * h) + second_[i + 1] * b * b * b / (6.0 * h) +
           (values_[i] / h - second_[i] * h / 6.0) * a +
           (values_[i + 1] / h - second_[i + 1] * h / 6.0) * b;
}

double sample(const Field& f, double x) { return Sampler(f)(x); }

}  // namespace gmhd
