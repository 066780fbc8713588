#include <benchmark/benchmark.h>

#include "lshe/estimator.hpp"
#include "lshe/synthetic.hpp"

namespace {

void BM_ProfileAndEstimate(benchmark::State& state) {
  const auto g = lshe::synth_graph({{1, 70000}, {2, 10000}, {3, 5000}}, 1);
  const auto observed = lshe::simulate_edge_sampling(g, 0.5, 2);
  for (auto _ : state) benchmark::DoNotOptimize(lshe::lshe(lshe::component_profile(observed), 0.5));
}

}  // namespace

BENCHMARK(BM_ProfileAndEstimate)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
