#include <benchmark/benchmark.h>

#include <vector>

#include "forge/forge.hpp"

using namespace forge;

static void BM_Solve(benchmark::State& state) {
    const RadialGrid g(0.0, 10.0, static_cast<std::size_t>(state.range(0)));
    const SampledField V = evaluate_on_grid(parse("-2*exp(-r)"), g);
    const SampledField h = evaluate_on_grid(parse("1 + 0.5*exp(-r)"), g);
    for (auto _ : state) benchmark::DoNotOptimize(solve(V, h, 1.5, RegularAtLeft{}));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Solve)->Arg(1001)->Arg(10001)->Arg(100001);

static void BM_DarbouxPotential(benchmark::State& state) {
    const RadialGrid g = RadialGrid::with_step(0.0, 10.0, 1e-3);
    const Weight h(parse("1"), g);
    const SampledField V0 = SampledField::constant(g, 0.0);
    const Solution seed = seed_from_expression("cosh(r)", g, V0, h, -1.0);
    for (auto _ : state) benchmark::DoNotOptimize(darboux_potential(seed, h, V0));
}
BENCHMARK(BM_DarbouxPotential);

static void BM_BargmannThreeSeeds(benchmark::State& state) {
    const RadialGrid g = RadialGrid::with_step(0.0, 5.0, 2.5e-3);
    const Weight h(parse("1 + 0.5*exp(-r)"), g);
    const SampledField V0 = SampledField::constant(g, 0.0);
    std::vector<BargmannSeed> seeds;
    const double C[] = {0.3, 0.7, 0.9};
    const double gsq[] = {-1.0, -2.25, -4.0};
    for (int k = 0; k < 3; ++k) seeds.push_back({C[k], solve(V0, h.field(), gsq[k], RegularAtLeft{})});
    for (auto _ : state) {
        const PMatrix pm = p_matrix(seeds, h, Direction::FromLeft);
        benchmark::DoNotOptimize(bargmann_potential(seeds, pm, h, V0));
    }
}
BENCHMARK(BM_BargmannThreeSeeds);

static void BM_ParseAndDifferentiate(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(differentiate(parse("sech(r)^2 * sin(3*r) + log(1 + r^2) / sqrt(2 + cos(r))")));
    }
}
BENCHMARK(BM_ParseAndDifferentiate);

static void BM_Evaluate(benchmark::State& state) {
    const AnalyticExpr f = parse("sech(r)^2 * sin(3*r) + log(1 + r^2) / sqrt(2 + cos(r))");
    double r = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(f(r));
        r += 1e-6;
    }
}
BENCHMARK(BM_Evaluate);
BENCHMARK_MAIN();
