// Serial reference path against the OpenMP kernels. Each pair runs the same
// work; results are identical by construction (see the workbench tests).

#include <benchmark/benchmark.h>

#include "polariton/orientation.hpp"
#include "polariton/parallel.hpp"
#include "polariton/workbench.hpp"

using namespace polariton;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::Parallel : Execution::Serial; }

void label(benchmark::State& state) {
  state.SetLabel(to_string(mode(state)) + ", " + std::to_string(max_threads()) + " threads");
}

void BM_BandwidthSweep(benchmark::State& state) {
  const auto config = default_config(CavityConfig::Fundamental);
  const std::vector<double> grid{0.2, 0.4, 0.6, 0.8, 1.0, 0.3, 0.5, 0.7};
  for (auto _ : state) benchmark::DoNotOptimize(bandwidth_sweep(config, grid, mode(state)));
  label(state);
}

void BM_BruteForce(benchmark::State& state) {
  const auto moments = transition_moments(CavityConfig::SecondHarmonic);
  BruteForceOptions options;
  options.restarts = 64;
  options.execution = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_max_orientation(moments, options));
  label(state);
}

void BM_PhaseCut(benchmark::State& state) {
  const auto config = default_config(CavityConfig::SecondHarmonic);
  const auto grid = phase_grid(9);
  for (auto _ : state) benchmark::DoNotOptimize(phase_cuts(config, grid, mode(state)));
  label(state);
}

}  // namespace

BENCHMARK(BM_BandwidthSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BruteForce)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PhaseCut)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
