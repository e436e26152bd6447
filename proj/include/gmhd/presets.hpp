#pragma once

// Symbolic initial data on [0,1]: a polynomial plus a finite sum of
// a*sin(k*pi*x) / a*cos(k*pi*x) terms, so that values and derivatives of any
// order are evaluated exactly.
//
// Spec strings:
//   zero
//   quadratic                 x(1-x)
//   poly:[c0,c1,...]          sum c_i x^i
//   sine:k[,a]                a sin(k pi x)
//   cos:k[,a[,c]]             a cos(k pi x) + c
//   bump2:x0[,a]              a (x-x0)^2 q(x)
//   bump_m:x0,m[,a]           a (x-x0)^m q(x)
// with q = (1-x)^m for x0 = 0, x^m for x0 = 1, x(1-x) otherwise.

#include <string>
#include <vector>

#include "gmhd/grid.hpp"

namespace gmhd {

struct Extremum {
    double alpha;
    double value;
};

class Preset {
public:
    static constexpr int kMaxOrder = 6;

    static Preset parse(const std::string& spec);
    static Preset zero();
    static Preset polynomial(std::vector<double> coeffs, std::string spec = {});

    const std::string& spec() const noexcept { return spec_; }

    double operator()(double x) const { return derivative(x, 0); }
    /// k-th derivative at x, 0 <= k <= kMaxOrder.
    double derivative(double x, int k) const;

    bool is_zero() const noexcept;
    /// Extrema of the first derivative over [0,1]. Closed form for
    /// polynomials of degree <= 2 and single sine/cosine terms, otherwise
    /// dense sampling refined by Newton on the second derivative.
    Extremum slope_max() const;
    Extremum slope_min() const;
    double max_abs() const;

    /// Throws ConfigFault when the data is incompatible with the boundary
    /// condition (x(0)=x(1)=0 for Dirichlet, matching value and slope for
    /// periodic).
    void validate(BoundaryCondition bc, const std::string& name) const;

    /// Smallest m with |f^(k)(x0)| <= 1e-10 for k < m and |f^(m)(x0)| >= 1e-6,
    /// or -1 if no such m <= kMaxOrder exists.
    int zero_order(double x0) const;

    Field on(const GridSpec& grid) const;

private:
    struct Trig {
        double amp;
        double freq;  // k*pi
        bool cosine;
    };

    Extremum slope_extremum(bool maximize) const;

    std::string spec_;
    std::vector<double> poly_;
    std::vector<Trig> trig_;
};

}  // namespace gmhd
