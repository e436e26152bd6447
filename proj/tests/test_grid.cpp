#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gmhd/errors.hpp"
#include "gmhd/grid.hpp"

using namespace gmhd;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST(Grid, RejectsTooFewPoints) {
    EXPECT_THROW(GridSpec(8, BoundaryCondition::Dirichlet), ConfigFault);
    EXPECT_NO_THROW(GridSpec(16, BoundaryCondition::Periodic));
}

TEST(Grid, PointSpacingDependsOnBoundaryCondition) {
    GridSpec d(65, BoundaryCondition::Dirichlet), p(64, BoundaryCondition::Periodic);
    EXPECT_DOUBLE_EQ(d.x(64), 1.0);
    EXPECT_DOUBLE_EQ(p.h(), 1.0 / 64.0);
}

TEST(Grid, ParseBoundaryCondition) {
    EXPECT_EQ(parse_boundary_condition("periodic"), BoundaryCondition::Periodic);
    EXPECT_EQ(parse_boundary_condition("dirichlet"), BoundaryCondition::Dirichlet);
    EXPECT_THROW(parse_boundary_condition("neumann"), ConfigFault);
}

TEST(Grid, DirichletDerivativesAreHighOrder) {
    GridSpec g(257, BoundaryCondition::Dirichlet);
    auto f = Field::from_function(g, [](double x) { return std::sin(3.0 * x) * x; });
    auto d1 = derivative(f, 1), d2 = derivative(f, 2);
    double e1 = 0, e2 = 0;
    for (std::size_t j = 0; j < g.n(); ++j) {
        const double x = g.x(j);
        e1 = std::max(e1, std::abs(d1[j] - (std::sin(3 * x) + 3 * x * std::cos(3 * x))));
        e2 = std::max(e2, std::abs(d2[j] - (6 * std::cos(3 * x) - 9 * x * std::sin(3 * x))));
    }
    EXPECT_LT(e1, 1e-10);
    EXPECT_LT(e2, 1e-8);
}

TEST(Grid, PeriodicDerivativeIsSpectral) {
    GridSpec g(64, BoundaryCondition::Periodic);
    auto f = Field::from_function(g, [](double x) { return std::cos(2 * pi * 3 * x); });
    auto d = derivative(f, 2);
    for (std::size_t j = 0; j < g.n(); ++j) {
        EXPECT_NEAR(d[j], -std::pow(6 * pi, 2) * f[j], 1e-9);
    }
}

TEST(Grid, QuadratureOddAndEven) {
    for (std::size_t n : {129u, 128u}) {
        GridSpec g(n, BoundaryCondition::Dirichlet);
        auto f = Field::from_function(g, [](double x) { return std::exp(x); });
        EXPECT_NEAR(quadrature(f), std::exp(1.0) - 1.0, 1e-10);
    }
    GridSpec even(128, BoundaryCondition::Dirichlet);
    EXPECT_THROW(quadrature(Field(even), QuadratureRule::Simpson), ConfigFault);
}

TEST(Grid, AntiderivativeDirichletEndValueMatchesQuadrature) {
    GridSpec g(201, BoundaryCondition::Dirichlet);
    auto w = Field::from_function(g, [](double x) { return std::cos(x); });
    auto u = antiderivative(w);
    EXPECT_EQ(u[0], 0.0);
    EXPECT_NEAR(u[g.n() - 1], quadrature(w), 1e-15);
    EXPECT_NEAR(u[100], std::sin(g.x(100)), 1e-9);
}

TEST(Grid, AntiderivativePeriodicNeedsZeroMean) {
    GridSpec g(64, BoundaryCondition::Periodic);
    auto w = Field::from_function(g, [](double x) { return 1.0 + std::sin(2 * pi * x); });
    EXPECT_THROW(antiderivative(w), ConsistencyFault);
}

TEST(Grid, NonFiniteFieldRaises) {
    GridSpec g(32, BoundaryCondition::Dirichlet);
    Field f(g);
    f[3] = std::nan("");
    EXPECT_THROW(derivative(f), FieldFault);
}

TEST(Grid, DealiasRemovesHighBand) {
    GridSpec g(48, BoundaryCondition::Periodic);
    auto f = Field::from_function(g, [](double x) { return std::sin(2 * pi * x) + std::sin(2 * pi * 20 * x); });
    dealias(f);
    for (std::size_t j = 0; j < g.n(); ++j) EXPECT_NEAR(f[j], std::sin(2 * pi * g.x(j)), 1e-12);
    EXPECT_NEAR(spectral_tail(f), 0.0, 1e-12);
}

TEST(Grid, SamplerExactAtNodesAndSmoothBetween) {
    GridSpec g(129, BoundaryCondition::Dirichlet);
    auto f = Field::from_function(g, [](double x) { return std::sin(2.0 * x); });
    Sampler s(f);
    EXPECT_EQ(s(g.x(7)), f[7]);
    EXPECT_NEAR(s(0.3337), std::sin(0.6674), 1e-8);
}

TEST(Grid, FornbergWeightsReproducePolynomials) {
    std::vector<double> nodes{0, 1, 2, 3, 4};
    auto w = fd_weights(1.5, nodes, 2);
    double d1 = 0, d2 = 0;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        d1 += w[1][k] * nodes[k] * nodes[k] * nodes[k];
        d2 += w[2][k] * nodes[k] * nodes[k] * nodes[k];
    }
    EXPECT_NEAR(d1, 3 * 1.5 * 1.5, 1e-12);
    EXPECT_NEAR(d2, 6 * 1.5, 1e-12);
}

TEST(Grid, RoughnessSeparatesSmoothFromGridScale) {
    GridSpec g(513, BoundaryCondition::Dirichlet);
    auto smooth = Field::from_function(g, [](double x) { return std::sin(std::numbers::pi * x); });
    EXPECT_LT(grid_roughness(smooth), 1e-12);
    auto zigzag = Field::from_function(g, [](double) { return 0.0; });
    for (std::size_t j = 0; j < g.n(); ++j) zigzag[j] = j % 2 ? 1.0 : -1.0;
    EXPECT_NEAR(grid_roughness(zigzag), 1.0, 1e-12);
    EXPECT_EQ(grid_roughness(Field::from_function(g, [](double) { return 0.0; })), 0.0);
}
