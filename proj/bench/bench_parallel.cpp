// Serial reference vs OpenMP kernels on the three data-parallel workloads.
// Arg 0 selects the serial path, 1 the parallel one.

#include <benchmark/benchmark.h>

#include "czcal/calibration.hpp"
#include "czcal/conditionality.hpp"

namespace czcal {
namespace {

ExecPolicy policy_of(const benchmark::State& state) {
  return state.range(0) == 0 ? ExecPolicy::kSerial : ExecPolicy::kParallel;
}

SurrogateConfig noisy_surrogate() {
  SurrogateConfig c;
  c.noise_floor.depolarizing_rate_per_cz = 0.01;
  c.noise_floor.readout_confusion = {symmetric_flip(0.02), symmetric_flip(0.02)};
  return c;
}

void BM_RunBatch(benchmark::State& state) {
  const SurrogateBackend backend(noisy_surrogate());
  const auto circuits = generate_rpe_circuits(static_cast<int>(state.range(1)));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_batch(backend, circuits, {1.0, 0.0}, {}, 1000, ++seed, policy_of(state)));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(circuits.size()));
}
BENCHMARK(BM_RunBatch)->ArgsProduct({{0, 1}, {6, 8}})->ArgNames({"parallel", "k_max"});

void BM_CoarseSweep(benchmark::State& state) {
  const SurrogateBackend backend(noisy_surrogate());
  const auto grid = make_grid(0.5, 1.5, 11, -0.5, 0.5, 11);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        coarse_sweep(grid, backend, 200, ++seed, ExpectationMode::kSampled, policy_of(state)));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}
BENCHMARK(BM_CoarseSweep)->Arg(0)->Arg(1)->ArgName("parallel");

// Three optimizer iterations of ten candidates each.
void BM_OptimizerPopulation(benchmark::State& state) {
  const SurrogateBackend backend(noisy_surrogate());
  OptimizerConfig oc;
  oc.max_iterations = 3;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimize(backend, oc, RpeConfig{}, ++seed, policy_of(state)));
  }
  state.SetItemsProcessed(state.iterations() * oc.population * oc.max_iterations);
}
BENCHMARK(BM_OptimizerPopulation)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace czcal

BENCHMARK_MAIN();
