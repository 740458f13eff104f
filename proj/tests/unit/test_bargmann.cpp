#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"

using namespace forge;
using forge::testing::field;
using forge::testing::sup_diff;

namespace {

struct Problem {
    RadialGrid g;
    Weight h;
    SampledField V0;
    Problem(double b, double step, const char* hx, const char* vx)
        : g(RadialGrid::with_step(0.0, b, step)), h(parse(hx), g), V0(field(g, vx)) {}

    std::vector<BargmannSeed> regular(std::initializer_list<std::pair<double, double>> gc) const {
        std::vector<BargmannSeed> out;
        for (auto [gsq, C] : gc) out.push_back({C, solve(V0, h.field(), gsq, RegularAtLeft{})});
        return out;
    }
    std::vector<BargmannSeed> jost(std::initializer_list<std::pair<double, double>> gc) const {
        std::vector<BargmannSeed> out;
        for (auto [gsq, C] : gc) out.push_back({C, solve(V0, h.field(), gsq, JostAtRight{})});
        return out;
    }
};

}  // namespace

TEST(PMatrix, IdentityWhenAllCouplingsVanish) {
    Problem s(5.0, 2.5e-3, "1 + 0.5*exp(-r)", "-exp(-r)");
    const auto seeds = s.regular({{-1.0, 0.0}, {-2.0, 0.0}, {-3.0, 0.0}});
    const PMatrix pm = p_matrix(seeds, s.h, Direction::FromLeft);
    for (std::size_t i = 0; i < pm.nodes(); i += 97) {
        EXPECT_TRUE(pm.value(i).isIdentity(0.0));
        EXPECT_TRUE(pm.derivative(i).isZero(0.0));
    }
    const SampledField V = bargmann_potential(seeds, pm, s.h, s.V0);
    for (std::size_t i = 0; i < V.size(); ++i) EXPECT_EQ(V.value(i), s.V0.value(i));

    const Solution phi0 = solve(s.V0, s.h.field(), 1.5, RegularAtLeft{});
    const Solution phi = bargmann_solution(seeds, pm, s.h, phi0);
    for (std::size_t i = 0; i < V.size(); ++i) {
        EXPECT_EQ(phi.field.value(i), phi0.field.value(i));
        EXPECT_EQ(phi.field.deriv(i), phi0.field.deriv(i));
    }
    for (const auto& y : transformed_seed_solutions(seeds, pm, s.h)) {
        for (std::size_t i = 0; i < V.size(); ++i) EXPECT_EQ(y.field.value(i), 0.0);
    }
}

TEST(PMatrix, SingleSeedClosedForm) {
    Problem s(2.0, 1e-3, "1", "0");
    const std::vector<BargmannSeed> seeds{{1.0, seed_from_expression("sinh(r)", s.g, s.V0, s.h, -1.0)}};
    const PMatrix pm = p_matrix(seeds, s.h, Direction::FromLeft);
    EXPECT_NEAR(pm.value(1000)(0, 0), 1.0 + (std::sinh(1.0) * std::cosh(1.0) - 1.0) / 2.0, 1e-10);
    EXPECT_EQ(pm.determinant(0), 1.0);
}

TEST(PMatrix, WronskianAndQuadratureFormsAgree) {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> gamma(-4.0, -0.5), coupling(0.1, 1.0);
    Problem s(5.0, 1e-3, "1 + 0.3*tanh(r)", "-2*exp(-r)");
    for (int trial = 0; trial < 5; ++trial) {
        const auto seeds = s.regular({{gamma(rng), coupling(rng)}, {gamma(rng), coupling(rng)}});
        const PMatrix pm = p_matrix(seeds, s.h, Direction::FromLeft);
        EXPECT_LE(pm.quadrature_discrepancy(), 1e-7);
    }
}

TEST(PMatrix, InverseAndSign) {
    Problem s(5.0, 2.5e-3, "1", "0");
    const auto seeds = s.regular({{-1.0, 0.3}, {-2.25, 0.7}, {-4.0, 0.9}});
    const PMatrix pm = p_matrix(seeds, s.h, Direction::FromLeft);
    EXPECT_EQ(pm.determinant(0), 1.0);
    for (std::size_t i = 0; i < pm.nodes(); ++i) {
        ASSERT_GT(pm.determinant(i), 0.0);
        const Eigen::MatrixXd P = pm.value(i);
        const Eigen::MatrixXd I = P.partialPivLu().inverse() * P;
        ASSERT_TRUE(I.isIdentity(1e-10)) << "node " << i;
    }
    EXPECT_GE(pm.max_condition(), 1.0);
    EXPECT_EQ(pm.min_abs_determinant(), 1.0);
}

TEST(PMatrix, RejectsBadSeedSets) {
    Problem s(4.0, 2e-3, "1", "0");
    EXPECT_THROW(p_matrix(std::vector<BargmannSeed>{}, s.h, Direction::FromLeft), InvalidArgument);
    EXPECT_THROW(p_matrix(s.regular({{-1.0, 0.5}, {-1.0, 0.3}}), s.h, Direction::FromLeft), InvalidArgument);
    EXPECT_THROW(p_matrix(s.regular({{-1.0, 0.5}}), s.h, Direction::FromRight), InvalidArgument);
    EXPECT_THROW(p_matrix(s.jost({{-1.0, 0.5}}), s.h, Direction::FromLeft), InvalidArgument);

    auto mixed = s.regular({{-1.0, 0.5}});
    mixed.push_back(s.jost({{-2.0, 0.5}}).front());
    EXPECT_THROW(p_matrix(mixed, s.h, Direction::FromLeft), InvalidArgument);

    std::vector<BargmannSeed> many;
    for (int k = 0; k < 9; ++k) many.push_back(s.regular({{-1.0 - 0.2 * k, 0.1}}).front());
    EXPECT_THROW(p_matrix(many, s.h, Direction::FromLeft), InvalidArgument);
    EXPECT_NO_THROW(p_matrix(many, s.h, Direction::FromLeft, BargmannOptions{9, 1e-8, 1e-6}));

    // a custom seed that does not vanish at a is not in the regular class
    std::vector<BargmannSeed> custom = s.regular({{-1.0, 0.5}});
    custom.push_back({0.5, solve(s.V0, s.h.field(), -2.0, CustomBoundary{1.0, 0.0, Endpoint::Left})});
    EXPECT_THROW(p_matrix(custom, s.h, Direction::FromLeft), InvalidArgument);
}

TEST(PMatrix, DeterminantZeroCrossingIsSingular) {
    Problem s(4.0, 2e-3, "1", "0");
    EXPECT_THROW(p_matrix(s.regular({{-1.0, -1.0}}), s.h, Direction::FromLeft), SingularTransform);
}

TEST(BargmannPotential, MatchesTwoStepChain) {
    Problem s(6.0, 1e-3, "1 + 0.5*exp(-r)", "-exp(-r)");
    const auto seeds = s.regular({{-1.3, 0.7}});
    const PMatrix pm = p_matrix(seeds, s.h, Direction::FromLeft);
    const SampledField V = bargmann_potential(seeds, pm, s.h, s.V0);
    const DarbouxChain chain = chain_second_step(seeds[0].phi0, s.h, s.V0, 0.7, Direction::FromLeft);
    EXPECT_LE(sup_diff(V.values(), chain.potential().values()), 1e-6);

    for (double gsq : {-0.4, 0.7, 2.2}) {
        const Solution phi0 = solve(s.V0, s.h.field(), gsq, RegularAtLeft{});
        EXPECT_LE(sup_diff(bargmann_solution(seeds, pm, s.h, phi0).field.values(), chain.solution(phi0).field.values()),
                  1e-8);
    }
}

TEST(BargmannPotential, RegularSeedLeavesOriginValue) {
    Problem s(5.0, 1e-3, "1", "0");
    const auto seeds = s.regular({{-1.0, 0.9}});
    const SampledField V = bargmann_potential(seeds, s.h, s.V0, Direction::FromLeft);
    EXPECT_NEAR(V.value(0), 0.0, 1e-12);
}

TEST(TransformedSeeds, SingleSeedMatchesNormalizedSeed) {
    Problem s(5.0, 1e-3, "1 + 0.2*r", "0");
    const auto seeds = s.regular({{-1.0, 0.6}});
    const PMatrix pm = p_matrix(seeds, s.h, Direction::FromLeft);
    const Solution y = transformed_seed_solutions(seeds, pm, s.h).front();
    const DarbouxChain chain = chain_second_step(seeds[0].phi0, s.h, s.V0, 0.6, Direction::FromLeft);
    for (std::size_t i = 0; i < s.g.size(); ++i) {
        EXPECT_NEAR(y.field.value(i), 0.6 * seeds[0].phi0.field.value(i) / chain.normalization().value(i),
                    1e-13 * (1 + std::abs(y.field.value(i))));
    }
}

TEST(TransformedSeeds, VanishLinearlyWithCoupling) {
    Problem s(4.0, 2e-3, "1", "0");
    const double C = 1e-9;
    const auto seeds = s.regular({{-1.0, C}, {-2.0, C}});
    const PMatrix pm = p_matrix(seeds, s.h, Direction::FromLeft);
    const auto ys = transformed_seed_solutions(seeds, pm, s.h);
    for (std::size_t mu = 0; mu < 2; ++mu) {
        for (std::size_t i = 0; i < s.g.size(); i += 50) {
            const double base = seeds[mu].phi0.field.value(i);
            EXPECT_NEAR(ys[mu].field.value(i) / C, base, 1e-4 * (1 + std::abs(base)));
        }
    }
}

TEST(TransformedSeeds, SolveTheNewEquationAtTheirOwnEnergy) {
    Problem s(5.0, 2.5e-3, "1 + 0.5*exp(-r)", "-exp(-r)");
    const auto seeds = s.regular({{-1.0, 0.4}, {-2.5, 0.8}});
    const PMatrix pm = p_matrix(seeds, s.h, Direction::FromLeft);
    const SampledField V = bargmann_potential(seeds, pm, s.h, s.V0);
    const auto ys = transformed_seed_solutions(seeds, pm, s.h);
    for (std::size_t mu = 0; mu < ys.size(); ++mu) {
        EXPECT_EQ(ys[mu].gamma_sq, seeds[mu].phi0.gamma_sq);
        const auto rep = residual(V, s.h.field(), ys[mu], 1e-5);
        EXPECT_TRUE(rep.pass) << mu << ": " << rep.max_rel;
    }
}

TEST(BargmannSolution, ResidualAndRegularity) {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> energy(-0.5, 4.0);
    Problem s(5.0, 2.5e-3, "1 + 0.5*exp(-r)", "-exp(-r)");
    const auto seeds = s.regular({{-1.0, 0.4}, {-2.5, 0.8}});
    const PMatrix pm = p_matrix(seeds, s.h, Direction::FromLeft);
    const SampledField V = bargmann_potential(seeds, pm, s.h, s.V0);
    for (int k = 0; k < 5; ++k) {
        const double gsq = energy(rng);
        const Solution phi = bargmann_solution(seeds, pm, s.h, solve(s.V0, s.h.field(), gsq, RegularAtLeft{}));
        EXPECT_TRUE(residual(V, s.h.field(), phi, 1e-5).pass) << gsq;
        EXPECT_EQ(phi.field.value(0), 0.0);
    }
    EXPECT_THROW(bargmann_solution(seeds, pm, s.h, seeds[0].phi0), InvalidArgument);
    EXPECT_THROW(bargmann_solution(seeds, pm, s.h, solve(s.V0, s.h.field(), 1.0, CustomBoundary{1, 0, Endpoint::Left})),
                 InvalidArgument);
}

TEST(BargmannSolution, JostPipelineFromRight) {
    Problem s(12.0, 2e-3, "1 + 0.5*exp(-r)", "-exp(-r)");
    const auto seeds = s.jost({{-1.0, 0.5}, {-2.25, 0.8}});
    const PMatrix pm = p_matrix(seeds, s.h, Direction::FromRight);
    EXPECT_EQ(pm.determinant(s.g.size() - 1), 1.0);
    const SampledField V = bargmann_potential(seeds, pm, s.h, s.V0);
    for (const auto& y : transformed_seed_solutions(seeds, pm, s.h)) {
        EXPECT_TRUE(residual(V, s.h.field(), y, 1e-5).pass);
    }
    for (double gsq : {-0.7, -0.3}) {
        const Solution phi = bargmann_solution(seeds, pm, s.h, solve(s.V0, s.h.field(), gsq, JostAtRight{}));
        EXPECT_TRUE(residual(V, s.h.field(), phi, 1e-5).pass) << gsq;
    }
}

TEST(Duality, WronskianIntegralForManyEnergies) {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> energy(-4.0, 4.0);
    Problem s(5.0, 1e-3, "1 + 0.4*sin(r)^2", "-2*exp(-r)");
    const auto seeds = s.regular({{-1.0, 1.0}, {-3.0, 1.0}});
    for (int k = 0; k < 20; ++k) {
        const Solution phi = solve(s.V0, s.h.field(), energy(rng), RegularAtLeft{});
        for (const auto& seed : seeds) {
            EXPECT_TRUE(check_wronskian_integral(seed.phi0, phi, s.h.field(), Direction::FromLeft, 1e-7).pass);
        }
    }
}
