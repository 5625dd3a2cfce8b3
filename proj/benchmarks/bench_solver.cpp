#include <benchmark/benchmark.h>

#include "snl/delta_bound.hpp"
#include "snl/fixtures.hpp"
#include "snl/solver.hpp"

namespace {

using namespace snl;

void BM_MultistartNet10(benchmark::State &state) {
  const auto net = fixtures::net10();
  const auto meas = measure(net, draw_noise(net, {0.1, noise_weights(net),
                                                  NoiseDistribution::kUniformBall, 1}));
  SolveOptions opts;
  opts.starts = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(multistart_solve(net, meas, opts));
}
BENCHMARK(BM_MultistartNet10)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_DeltaBoundDemo5(benchmark::State &state) {
  const auto net = fixtures::demo5();
  for (auto _ : state) benchmark::DoNotOptimize(delta_bound(net, 0.1, {}));
}
BENCHMARK(BM_DeltaBoundDemo5)->Unit(benchmark::kMillisecond)->Iterations(2);

}  // namespace

BENCHMARK_MAIN();
