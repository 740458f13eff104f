#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"

using namespace forge;
using forge::testing::field;
using forge::testing::sup_diff;

namespace {

double sin_error(double step) {
    const RadialGrid g = RadialGrid::with_step(0.0, M_PI, step);
    const auto V = SampledField::constant(g, 0.0);
    const auto h = SampledField::constant(g, 1.0);
    const Solution s = solve(V, h, 1.0, RegularAtLeft{});
    return sup_diff(s.field.values(), g, [](double r) { return std::sin(r); });
}

}  // namespace

TEST(Solver, SineReference) {
    EXPECT_LE(sin_error(1e-3), 1e-8);
    const RadialGrid g = RadialGrid::with_step(0.0, M_PI, 1e-3);
    const Solution s = solve(SampledField::constant(g, 0.0), SampledField::constant(g, 1.0), 1.0, RegularAtLeft{});
    EXPECT_LE(sup_diff(s.field.derivs(), g, [](double r) { return std::cos(r); }), 1e-8);
    EXPECT_EQ(s.field.value(0), 0.0);
    EXPECT_EQ(s.field.deriv(0), 1.0);
}

TEST(Solver, FourthOrderOnHalving) {
    const double ratio = sin_error(0.1) / sin_error(0.05);
    EXPECT_GE(ratio, 11.0);
    EXPECT_GE(std::log2(ratio), 3.5);
}

TEST(Solver, ZeroEnergyGivesLinearSolution) {
    const RadialGrid g(0.0, 10.0, 1001);
    const Solution s = solve(SampledField::constant(g, 0.0), SampledField::constant(g, 1.0), 0.0, RegularAtLeft{});
    EXPECT_LE(sup_diff(s.field.values(), g, [](double r) { return r; }), 1e-12);
}

TEST(Solver, CustomBoundaryCosh) {
    const RadialGrid g = RadialGrid::with_step(0.0, 1.0, 1e-3);
    const Solution s = solve(SampledField::constant(g, 0.0), SampledField::constant(g, 1.0), -1.0,
                             CustomBoundary{1.0, 0.0, Endpoint::Left});
    EXPECT_NEAR(s.field.value(g.size() - 1), std::cosh(1.0), 1e-8);
    EXPECT_NEAR(s.field.value(g.size() - 1), 1.543080, 1e-6);
}

TEST(Solver, CustomBoundaryAtRightIntegratesLeftward) {
    const RadialGrid g = RadialGrid::with_step(0.0, 2.0, 1e-3);
    const Solution s = solve(SampledField::constant(g, 0.0), SampledField::constant(g, 1.0), 1.0,
                             CustomBoundary{std::sin(2.0), std::cos(2.0), Endpoint::Right});
    EXPECT_LE(sup_diff(s.field.values(), g, [](double r) { return std::sin(r); }), 1e-9);
}

TEST(Solver, JostNormalization) {
    const RadialGrid g = RadialGrid::with_step(0.0, 5.0, 1e-3);
    const Solution s = solve(SampledField::constant(g, 0.0), SampledField::constant(g, 1.0), -1.0, JostAtRight{});
    EXPECT_LE(sup_diff(s.field.values(), g, [](double r) { return std::exp(-r); }), 1e-9);
    EXPECT_THROW(solve(SampledField::constant(g, 0.0), SampledField::constant(g, 1.0), 1.0, JostAtRight{}),
                 DomainError);
}

TEST(Solver, RejectsNonPositiveWeightAndOverflow) {
    const RadialGrid g(0.0, 10.0, 1001);
    const auto V = SampledField::constant(g, 0.0);
    EXPECT_THROW(solve(V, field(g, "1 - r/5"), 1.0, RegularAtLeft{}), DomainError);
    EXPECT_THROW(solve(V, SampledField::constant(g, 1.0), -1e6, RegularAtLeft{}), DomainError);
    EXPECT_THROW(Weight(parse("r - 1"), g), DomainError);
}

TEST(Solver, WronskianConstantAtSharedEnergy) {
    const RadialGrid g = RadialGrid::with_step(0.0, 6.0, 1e-3);
    const auto V = field(g, "-3*exp(-r)");
    const auto h = field(g, "1 + 0.5*tanh(r)");
    const Solution a = solve(V, h, 0.7, RegularAtLeft{});
    const Solution b = solve(V, h, 0.7, CustomBoundary{1.0, 0.3, Endpoint::Left});
    const auto w = wronskian(a.field, b.field);
    double spread = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) spread = std::max(spread, std::abs(w.value(i) - w.value(0)));
    EXPECT_LE(spread, 1e-8);
}

TEST(Solver, OutputsPassResidual) {
    const RadialGrid g = RadialGrid::with_step(0.0, 10.0, 1e-3);
    const auto V = field(g, "-2*sech(r)^2");
    const auto h = field(g, "1 + exp(-r)");
    for (double gsq : {-0.5, 0.3, 2.0}) {
        const Solution s = solve(V, h, gsq, RegularAtLeft{});
        EXPECT_TRUE(residual(V, h, s, 1e-6).pass) << gsq;
    }
}

TEST(Seed, AcceptsTrueSolutions) {
    const RadialGrid g = RadialGrid::with_step(0.0, 10.0, 1e-3);
    const auto V0 = SampledField::constant(g, 0.0);
    const Solution c = seed_from_expression("cosh(r)", g, V0, Weight(parse("1"), g), -1.0);
    EXPECT_EQ(c.gamma_sq, -1.0);
    ASSERT_TRUE(c.curvature.has_value());
    EXPECT_NEAR((*c.curvature)[5], std::cosh(g.node(5)), 1e-12);
    const auto* bc = std::get_if<CustomBoundary>(&c.bc);
    ASSERT_NE(bc, nullptr);
    EXPECT_EQ(bc->value, 1.0);
    EXPECT_EQ(bc->slope, 0.0);

    EXPECT_NO_THROW(seed_from_expression("1", g, V0, Weight(parse("(1+r)^4"), g), 0.0));
}

TEST(Seed, RejectsNonSolutions) {
    const RadialGrid g = RadialGrid::with_step(0.0, 10.0, 1e-3);
    const auto V0 = SampledField::constant(g, 0.0);
    try {
        seed_from_expression("sin(r)+0.1", g, V0, Weight(parse("1"), g), 1.0);
        FAIL();
    } catch (const ResidualFailure& e) {
        EXPECT_NEAR(e.report().max_abs, 0.1, 1e-6);
        EXPECT_FALSE(e.report().pass);
    }
    EXPECT_THROW(seed_from_expression("log(r)", g, V0, Weight(parse("1"), g), 0.0), DomainError);
    EXPECT_THROW(seed_from_expression("r +", g, V0, Weight(parse("1"), g), 0.0), ParseError);
}
