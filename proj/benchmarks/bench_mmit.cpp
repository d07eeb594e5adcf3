#include <vector>

#include <benchmark/benchmark.h>

#include "mmit/mmit.hpp"

namespace {

using mmit::LossKind;

// Full insertion sweep over n synthetic limits.
void BM_SolverSweep(benchmark::State& state, LossKind kind) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto terms = mmit::dataset_terms(mmit::generate_bench_limits(n, 1), 1.0, kind);
    for (auto _ : state) {
        mmit::HingeSolver solver(kind, 1.0);
        for (const auto& t : terms) benchmark::DoNotOptimize(solver.insert(t));
    }
    state.SetComplexityN(state.range(0));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}
BENCHMARK_CAPTURE(BM_SolverSweep, linear, LossKind::Linear)
    ->RangeMultiplier(10)
    ->Range(1000, 1000000)
    ->Complexity(benchmark::oNLogN)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SolverSweep, squared, LossKind::Squared)
    ->RangeMultiplier(10)
    ->Range(1000, 1000000)
    ->Complexity(benchmark::oNLogN)
    ->Unit(benchmark::kMillisecond);

mmit::Dataset sim(std::size_t n) {
    mmit::SimSpec spec;
    spec.pattern = mmit::SimPattern::Sin;
    spec.n = n;
    spec.seed = 3;
    return mmit::simulate(spec);
}

void BM_BestSplit(benchmark::State& state) {
    const auto data = sim(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(mmit::best_split(data, LossKind::Squared, 0.25));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BestSplit)->RangeMultiplier(4)->Range(256, 16384)->Complexity(benchmark::oNLogN);

void BM_Fit(benchmark::State& state) {
    const auto data = sim(static_cast<std::size_t>(state.range(0)));
    mmit::TreeParams params;
    params.loss = LossKind::Linear;
    params.margin = 0.25;
    params.max_depth = 8;
    for (auto _ : state) benchmark::DoNotOptimize(mmit::fit(data, params));
}
BENCHMARK(BM_Fit)->RangeMultiplier(4)->Range(256, 4096)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
