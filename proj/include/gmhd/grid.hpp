#pragma once

// Uniform-grid discretization of [0,1].
//
// Periodic grids use the points x_j = j/n and Fourier spectral operators.
// Dirichlet grids use x_j = j/(n-1) and sixth-order finite differences with
// one-sided closures at the two end points.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace gmhd {

enum class BoundaryCondition { Dirichlet, Periodic };

std::string to_string(BoundaryCondition bc);
BoundaryCondition parse_boundary_condition(const std::string& text);

enum class QuadratureRule {
    Auto,     // Simpson for odd n, Simpson + 3/8 closure for even n
    Simpson,  // strict composite Simpson, odd n only
};

class GridSpec {
public:
    static constexpr std::size_t kMinPoints = 16;

    GridSpec(std::size_t n, BoundaryCondition bc);

    std::size_t n() const noexcept { return n_; }
    BoundaryCondition bc() const noexcept { return bc_; }
    double h() const noexcept { return h_; }
    bool periodic() const noexcept { return bc_ == BoundaryCondition::Periodic; }
    double x(std::size_t j) const noexcept { return static_cast<double>(j) * h_; }
    std::vector<double> points() const;

    bool operator==(const GridSpec& other) const noexcept {
        return n_ == other.n_ && bc_ == other.bc_;
    }

private:
    std::size_t n_;
    BoundaryCondition bc_;
    double h_;
};

/// Grid samples of a real function. Entries are expected to be finite;
/// operations check and raise FieldFault otherwise.
class Field {
public:
    explicit Field(const GridSpec& grid);
    Field(const GridSpec& grid, std::vector<double> values);

    template <typename F>
    static Field from_function(const GridSpec& grid, F&& f) {
        Field out(grid);
        for (std::size_t j = 0; j < grid.n(); ++j) out.values_[j] = f(grid.x(j));
        return out;
    }

    const GridSpec& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }
    double operator[](std::size_t j) const noexcept { return values_[j]; }
    double& operator[](std::size_t j) noexcept { return values_[j]; }

    double max_abs() const noexcept;
    double min() const noexcept;
    double max() const noexcept;

    /// Throws FieldFault naming the first non-finite entry.
    void require_finite(const char* context) const;

    Field& operator+=(const Field& other);
    Field& operator-=(const Field& other);
    Field& operator*=(double s);
    Field& operator+=(double s);

private:
    GridSpec grid_;
    std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(Field a, double s);
Field operator*(double s, Field a);
/// Pointwise product.
Field hadamard(const Field& a, const Field& b);

/// Spatial derivative of the given order (1..6).
Field derivative(const Field& f, int order = 1);

/// Integral over [0,1].
double quadrature(const Field& f, QuadratureRule rule = QuadratureRule::Auto);

/// Tolerance on the mean of omega accepted by antiderivative() on periodic
/// grids, scaled by max(1, max|omega|).
inline constexpr double kMeanTolerance = 1e-10;

/// u(x) = int_0^x omega. Dirichlet pins u(0) = 0 and the value at x = 1
/// equals quadrature(omega) up to rounding. Periodic returns the zero-mean
/// antiderivative and requires omega to have zero mean.
Field antiderivative(const Field& omega);

/// Removes the 2/3-rule band |k| > n/3 and the Nyquist mode (periodic only).
void dealias(Field& f);
/// Removes the Nyquist mode (periodic only).
void remove_nyquist(Field& f);

/// Periodic only: L2 norm of the modes n/4 <= k < n/3 relative to the full
/// norm (0 for a zero field). Measures how close a dealiased field is to
/// running out of resolved modes.
double spectral_tail(const Field& f);
/// max |6th undivided difference| / (64 max|f|): near 0 for resolved data,
/// order 1 for grid-scale oscillation.
double grid_roughness(const Field& f);

/// Off-grid evaluation. Periodic: four-point cubic interpolation with
/// wraparound. Dirichlet: cubic spline clamped with sixth-order end slopes.
/// Exact at grid nodes.
class Sampler {
public:
    explicit Sampler(const Field& f);
    double operator()(double x) const;

private:
    GridSpec grid_;
    std::vector<double> values_;
    std::vector<double> second_;  // spline second derivatives (Dirichlet)
};

double sample(const Field& f, double x);

/// Finite-difference weights (Fornberg) for derivatives 0..max_order at z on
/// the given nodes. Result is indexed [order][node].
std::vector<std::vector<double>> fd_weights(double z, std::span<const double> nodes,
                                            int max_order);

}  // namespace gmhd
