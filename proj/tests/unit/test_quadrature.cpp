#include "casimir/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace casimir;

TEST(Quadrature, PolynomialExact)
{
    auto r = integrate_interval([](double x) { return x * x * x - 2 * x; }, 0.0, 2.0, 1e-14, 0.0, 10);
    EXPECT_NEAR(r.value, 0.0, 1e-14);
    r = integrate_interval([](double x) { return std::pow(x, 10); }, 0.0, 1.0, 1e-14, 0.0, 10);
    EXPECT_NEAR(r.value, 1.0 / 11.0, 1e-15);
}

TEST(Quadrature, SemiInfiniteBoseIntegral)
{
    // int_0^inf y^2/(e^y - 1) dy = 2 zeta(3)
    ConvergenceSpec spec;
    spec.rel_tol = 1e-13;
    auto r = integrate_y([](double y) { return y > 0 ? y * y / std::expm1(y) : 0.0; }, 0.0, spec);
    EXPECT_NEAR(r.value, 2.0 * 1.2020569031595942854, 1e-12);
}

TEST(Quadrature, EndpointSingularityAdapts)
{
    ConvergenceSpec spec;
    spec.rel_tol = 1e-10;
    // int_0^inf y ln(1 - e^-y) dy = -zeta(3); log singularity at y = 0
    auto r = integrate_y([](double y) { return y * std::log1p(-std::exp(-y)); }, 0.0, spec);
    EXPECT_NEAR(r.value, -1.2020569031595942854, 1e-10);
    EXPECT_LE(r.error, 1e-10 * 1.21);
}

TEST(Quadrature, TwoDimensionalTriangle)
{
    // int_0^inf dxi int_xi^inf e^{-y} dy = 1
    ConvergenceSpec spec;
    spec.rel_tol = 1e-12;
    auto r = integrate_2d([](double, double y) { return std::exp(-y); }, spec);
    EXPECT_NEAR(r.value, 1.0, 1e-11);
    // int dxi int_xi y ln(1 - e^-y) dy = int y^2 ln(1 - e^-y) dy = -2 zeta(4) = -pi^4/45
    auto ideal = integrate_2d([](double, double y) { return y * std::log1p(-std::exp(-y)); }, spec);
    EXPECT_NEAR(ideal.value, -std::pow(std::numbers::pi, 4) / 45.0, 1e-10);
}

TEST(Quadrature, BudgetExhaustionReportsPartial)
{
    try {
        integrate_interval([](double x) { return std::sin(1.0 / x); }, 1e-9, 1.0, 1e-14, 0.0, 5);
        FAIL() << "expected ConvergenceError";
    } catch (const ConvergenceError& e) {
        EXPECT_TRUE(std::isfinite(e.partial()));
        EXPECT_GT(e.report().estimated_tail, 0.0);
    }
}

TEST(Quadrature, MatsubaraSumGeometric)
{
    ConvergenceSpec spec;
    spec.rel_tol = 1e-12;
    auto s = matsubara_sum([](long l) { return std::pow(0.5, l); }, spec);
    EXPECT_NEAR(s.value, 1.0, 1e-11);
    EXPECT_LT(s.report.terms_used, 60);
    // exponentially decaying, e^{-l}
    auto e = matsubara_sum([](long l) { return std::exp(-double(l)); }, spec);
    EXPECT_NEAR(e.value, 1.0 / (std::exp(1.0) - 1.0), 1e-12);
}

TEST(Quadrature, MatsubaraSumBudget)
{
    ConvergenceSpec spec;
    spec.max_matsubara = 100;
    EXPECT_THROW(matsubara_sum([](long l) { return 1.0 / l; }, spec), ConvergenceError);
}

TEST(Quadrature, SpecValidation)
{
    ConvergenceSpec spec;
    spec.rel_tol = 1e-3;
    EXPECT_THROW(spec.validate(), std::invalid_argument);
    spec = {};
    spec.y_cutoff_margin = 10;
    EXPECT_THROW(spec.validate(), std::invalid_argument);
    EXPECT_NO_THROW(ConvergenceSpec{}.validate());
}
