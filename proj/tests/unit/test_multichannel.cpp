#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"

using namespace forge;
using forge::testing::field;
using forge::testing::sup_diff;

namespace {

struct TwoChannel {
    RadialGrid g = RadialGrid::with_step(0.0, 5.0, 2.5e-3);
    Weight h{parse("1 + 0.5*exp(-r)"), g};
    std::vector<SampledField> V0{SampledField::constant(g, 0.0), SampledField::constant(g, 0.0),
                                 SampledField::constant(g, 0.0), field(g, "0.5*exp(-r)")};
    std::vector<double> gp{-1.0, -2.0};
    std::vector<BoundaryCondition> bc{RegularAtLeft{}, RegularAtLeft{}};

    ChannelSystem system(std::vector<double> c) const {
        return ChannelSystem{2, V0, h, diagonal_base_solutions(V0, h, gp, bc), std::move(c), gp, Direction::FromLeft};
    }
};

std::vector<SampledField> fields(const std::vector<Solution>& s) {
    std::vector<SampledField> out;
    for (const auto& x : s) out.push_back(x.field);
    return out;
}

}  // namespace

TEST(Multichannel, ZeroCouplingIsIdentity) {
    TwoChannel t;
    const ChannelSystem cs = t.system({0.0, 0.0});
    for (const auto& p : seed_vectors(cs)) {
        for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(p.value(i), 0.0);
    }
    const TransformedSeeds ts = transformed_seed_vectors(cs);
    for (std::size_t i = 0; i < t.g.size(); ++i) EXPECT_EQ(ts.denominator.value(i), 1.0);
    const auto V = multichannel_potential(cs);
    for (std::size_t k = 0; k < 4; ++k) {
        for (std::size_t i = 0; i < t.g.size(); ++i) EXPECT_EQ(V[k].value(i), t.V0[k].value(i));
    }
    const std::vector<double> gs{0.5, -0.5};
    const auto phi0 = diagonal_base_solutions(t.V0, t.h, gs, t.bc);
    const auto phi = multichannel_solution(cs, phi0, gs);
    for (std::size_t k = 0; k < 4; ++k) {
        for (std::size_t i = 0; i < t.g.size(); ++i) EXPECT_EQ(phi[k].field.value(i), phi0[k].field.value(i));
    }
}

TEST(Multichannel, SeedVectorsSolveTheBaseSystem) {
    TwoChannel t;
    const ChannelSystem cs = t.system({0.6, 0.8});
    EXPECT_NO_THROW(validate(cs));
    const auto psi0 = seed_vectors(cs);
    EXPECT_LE(matrix_residual(t.V0, t.h.field(), psi0, t.gp, 1e-6).max_rel, 1e-6);
}

TEST(Multichannel, DenominatorIsMonotone) {
    TwoChannel t;
    const TransformedSeeds ts = transformed_seed_vectors(t.system({0.6, 0.8}));
    EXPECT_EQ(ts.denominator.value(0), 1.0);
    for (std::size_t i = 1; i < t.g.size(); ++i) EXPECT_GE(ts.denominator.value(i), ts.denominator.value(i - 1));
}

TEST(Multichannel, GenericTwoChannelSystem) {
    TwoChannel t;
    const ChannelSystem cs = t.system({0.6, 0.8});
    const auto V = multichannel_potential(cs);
    EXPECT_LE(symmetry_defect(V, 2), 1e-5);

    const TransformedSeeds ts = transformed_seed_vectors(cs);
    EXPECT_TRUE(matrix_residual(V, t.h.field(), ts.psi, t.gp, 1e-5).pass);

    const std::vector<double> gs{0.5, -0.5};
    const auto integral = multichannel_solution(cs, gs, SolutionForm::Integral);
    const auto wform = multichannel_solution(cs, gs, SolutionForm::Wronskian);
    const auto rep = matrix_residual(V, t.h.field(), fields(integral), gs, 1e-5);
    EXPECT_TRUE(rep.pass) << rep.max_rel;
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_LE(sup_diff(integral[k].field.values(), wform[k].field.values()), 1e-7);
    }
}

TEST(Multichannel, RejectsNonUniformShift) {
    TwoChannel t;
    const ChannelSystem cs = t.system({0.6, 0.8});
    const std::vector<double> bad{0.5, 0.5};
    EXPECT_THROW(multichannel_solution(cs, bad), InvalidArgument);
    EXPECT_THROW(multichannel_solution(cs, t.gp, SolutionForm::Wronskian), InvalidArgument);
    EXPECT_NO_THROW(multichannel_solution(cs, t.gp, SolutionForm::Integral));
}

TEST(Multichannel, ValidationErrors) {
    TwoChannel t;
    ChannelSystem asym = t.system({0.6, 0.8});
    asym.base_potential[1] = field(t.g, "0.1");
    EXPECT_THROW(validate(asym), InvalidArgument);

    ChannelSystem wrong_level = t.system({0.6, 0.8});
    wrong_level.gamma_prime_sq = {-1.0, -2.5};
    EXPECT_THROW(validate(wrong_level), InvalidArgument);

    ChannelSystem not_solution = t.system({0.6, 0.8});
    for (auto& s : not_solution.seed_solutions) s.field = field(t.g, "sin(r)");
    EXPECT_THROW(validate(not_solution), ResidualFailure);

    ChannelSystem short_c = t.system({0.6});
    EXPECT_THROW(seed_vectors(short_c), InvalidArgument);

    std::vector<SampledField> coupled = t.V0;
    coupled[1] = coupled[2] = field(t.g, "0.1*exp(-r)");
    EXPECT_THROW(diagonal_base_solutions(coupled, t.h, t.gp, t.bc), InvalidArgument);
}

TEST(Multichannel, SingleChannelReducesToBargmann) {
    const RadialGrid g = RadialGrid::with_step(0.0, 5.0, 1e-3);
    const Weight h(parse("1 + 0.3*tanh(r)"), g);
    const std::vector<SampledField> V0{field(g, "-exp(-r)")};
    const std::vector<double> gp{-1.2};
    const std::vector<BoundaryCondition> bc{RegularAtLeft{}};
    const double c = 0.7;
    const ChannelSystem cs{1, V0, h, diagonal_base_solutions(V0, h, gp, bc), {c}, gp, Direction::FromLeft};
    const auto V = multichannel_potential(cs);

    const std::vector<BargmannSeed> seeds{{c * c, cs.seed_solutions[0]}};
    const PMatrix pm = p_matrix(seeds, h, Direction::FromLeft);
    const SampledField Vb = bargmann_potential(seeds, pm, h, V0[0]);
    EXPECT_LE(sup_diff(V[0].values(), Vb.values()), 1e-10);

    const std::vector<double> gs{0.9};
    const auto phi = multichannel_solution(cs, gs);
    const Solution phib = bargmann_solution(seeds, pm, h, solve(V0[0], h.field(), 0.9, RegularAtLeft{}));
    EXPECT_LE(sup_diff(phi[0].field.values(), phib.field.values()), 1e-10);

    // psi = c phi0 / D and y = C phi0 / P with C = c^2, D = P
    const TransformedSeeds ts = transformed_seed_vectors(cs);
    const Solution y = transformed_seed_solutions(seeds, pm, h).front();
    for (std::size_t i = 0; i < g.size(); i += 100) {
        EXPECT_NEAR(c * ts.psi[0].value(i), y.field.value(i), 1e-12 * (1 + std::abs(y.field.value(i))));
    }
}

TEST(Multichannel, SingleChannelSinhDenominator) {
    const RadialGrid g = RadialGrid::with_step(0.0, 2.0, 1e-3);
    const Weight h(parse("1"), g);
    const std::vector<SampledField> V0{SampledField::constant(g, 0.0)};
    const std::vector<double> gp{-1.0};
    const std::vector<Solution> seeds{seed_from_expression("sinh(r)", g, V0[0], h, -1.0)};
    const ChannelSystem cs{1, V0, h, seeds, {1.0}, gp, Direction::FromLeft};
    EXPECT_NEAR(transformed_seed_vectors(cs).denominator.value(1000), 1.0 + (std::sinh(2.0) / 4 - 0.5), 1e-10);
}
