// Timing for the mechanism kernels and the trial runner.
//
//   bench_kernels --benchmark_filter=Experiment

#include <benchmark/benchmark.h>

#include "matchmech/mechanisms.hpp"
#include "matchmech/simharness.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace matchmech;

namespace {

IndexedCategory square(Index n, std::uint64_t seed) {
    RandomSource src(seed);
    return generate_indexed(square_spec(n, 1), src)[0];
}

void BM_Toam(benchmark::State& state) {
    const auto n = static_cast<Index>(state.range(0));
    const auto cat = square(n, 1);
    RandomSource src(2);
    const auto own = initialize_endowment(cat, src);
    for (auto _ : state) {
        benchmark::DoNotOptimize(toam_allocate(cat, own));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Toam)->RangeMultiplier(2)->Range(16, 1024)->Complexity(benchmark::oNSquared);

void BM_Ranpam(benchmark::State& state) {
    const auto cat = square(static_cast<Index>(state.range(0)), 3);
    RandomSource src(4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ranpam_allocate(cat, src));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Ranpam)->RangeMultiplier(2)->Range(16, 1024)->Complexity(benchmark::oNSquared);

void BM_ToamIcomp(benchmark::State& state) {
    const auto cat = square(static_cast<Index>(state.range(0)), 5);
    RandomSource src(6);
    for (auto _ : state) {
        benchmark::DoNotOptimize(toam_icomp_allocate(cat, src));
    }
}
BENCHMARK(BM_ToamIcomp)->RangeMultiplier(4)->Range(16, 1024);

ExperimentConfig sweep() {
    ExperimentConfig cfg;
    for (int row = 1; row <= kTableRows; ++row) cfg.specs.push_back(table_ii(1, row));
    cfg.mechanisms = {MechanismKind::toam, MechanismKind::ranpam, MechanismKind::toam_icomp};
    cfg.levels = {VariationLevel::none, VariationLevel::large};
    cfg.trials = 20;
    cfg.base_seed = 11;
    return cfg;
}

void BM_ExperimentSerial(benchmark::State& state) {
    const auto cfg = sweep();
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_experiment_serial(cfg));
    }
}
BENCHMARK(BM_ExperimentSerial)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_ExperimentParallel(benchmark::State& state) {
    const auto cfg = sweep();
#ifdef _OPENMP
    const int before = omp_get_max_threads();
    omp_set_num_threads(static_cast<int>(state.range(0)));
#endif
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_experiment(cfg));
    }
#ifdef _OPENMP
    omp_set_num_threads(before);
#endif
}
BENCHMARK(BM_ExperimentParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
