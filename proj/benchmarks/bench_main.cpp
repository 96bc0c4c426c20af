#include <benchmark/benchmark.h>

#include <cmath>

#include "lorentz/arithmetic.hpp"
#include "lorentz/billiard.hpp"
#include "lorentz/constants.hpp"
#include "lorentz/equilibrium.hpp"
#include "lorentz/kernel.hpp"
#include "lorentz/mc.hpp"
#include "lorentz/solver.hpp"

using namespace lorentz;

namespace {
const double kGolden = 0.5 * (std::sqrt(5.0) - 1.0);

void BM_ExitTime(benchmark::State& st) {
    const double r = 1.0 / static_cast<double>(st.range(0));
    Rng rng(1);
    for (auto _ : st) {
        const auto w = Direction::from_angle(kTwoPi * uniform01(rng));
        benchmark::DoNotOptimize(billiard::transfer_map(2.0 * uniform01(rng) - 1.0, w, r));
    }
}
BENCHMARK(BM_ExitTime)->Arg(10)->Arg(100)->Arg(1000)->Arg(10000);

void BM_ObstacleParamsCF(benchmark::State& st) {
    const auto w = Direction::from_vector(1.0, kGolden);
    const double r = std::pow(10.0, -static_cast<double>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(arithmetic::obstacle_params_cf(w, r));
}
BENCHMARK(BM_ObstacleParamsCF)->DenseRange(2, 10, 4);

void BM_ObstacleParamsFarey(benchmark::State& st) {
    const auto w = Direction::from_vector(1.0, kGolden);
    const double r = std::pow(10.0, -static_cast<double>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(arithmetic::obstacle_params_farey(w, r));
}
BENCHMARK(BM_ObstacleParamsFarey)->DenseRange(2, 10, 4);

void BM_PSimple(benchmark::State& st) {
    Rng rng(2);
    for (auto _ : st)
        benchmark::DoNotOptimize(kernel::p_simple(4.0 * uniform01(rng), 2.0 * uniform01(rng) - 1.0, 2.0 * uniform01(rng) - 1.0));
}
BENCHMARK(BM_PSimple);

void BM_EquilibriumE(benchmark::State& st) {
    Rng rng(3);
    for (auto _ : st) benchmark::DoNotOptimize(kernel::equilibrium_E(3.0 * uniform01(rng), 2.0 * uniform01(rng) - 1.0));
}
BENCHMARK(BM_EquilibriumE);

void BM_SampleP(benchmark::State& st) {
    Rng rng(4);
    for (auto _ : st) benchmark::DoNotOptimize(kernel::sample_P(0.3, rng));
}
BENCHMARK(BM_SampleP);

void BM_MarkovStep(benchmark::State& st) {
    Rng rng(5);
    mc::MarkovState s{{0.5, 0.5}, Direction::from_angle(0.3), 0.5, 0.1, 0.0};
    for (auto _ : st) {
        s = mc::markov_step(s, rng);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_MarkovStep);

void BM_SolverStep(benchmark::State& st) {
    solver::Grids g;
    g.nx = static_cast<int>(st.range(0));
    g.ny = 1;
    g.nomega = 32;
    g.kernel_subcells = 2;
    const solver::Solver S(g);
    auto f = S.init_field(InitialData{InitialData::Kind::Cosine});
    const double dt = S.disc().max_dt();
    for (auto _ : st) S.step(f, dt);
    st.SetItemsProcessed(st.iterations() * static_cast<long>(S.disc().size()));
}
BENCHMARK(BM_SolverStep)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
