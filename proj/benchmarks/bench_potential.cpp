#include <benchmark/benchmark.h>

#include <cmath>

#include "snl/network.hpp"
#include "snl/potential.hpp"

namespace {

using namespace snl;

SensorNetwork network_of_size(int n) {
  const double side = std::sqrt(static_cast<double>(n));
  return generate_network(n, 3, 1.8, {{0, 0}, {side, side}}, 1);
}

void BM_Potential(benchmark::State &state) {
  const auto net = network_of_size(static_cast<int>(state.range(0)));
  const auto meas = measure(net, draw_noise(net, {0.1, {}, NoiseDistribution::kUniformBall, 1}));
  const VectorXd x = net.true_profile();
  for (auto _ : state) benchmark::DoNotOptimize(potential(net, meas, x));
  state.counters["edges"] = net.num_edges();
}
BENCHMARK(BM_Potential)->Arg(7)->Arg(50)->Arg(200);

void BM_GradientHessian(benchmark::State &state) {
  const auto net = network_of_size(static_cast<int>(state.range(0)));
  const auto meas = measure(net, draw_noise(net, {0.1, {}, NoiseDistribution::kUniformBall, 1}));
  const VectorXd x = net.true_profile();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(net, meas, x));
}
BENCHMARK(BM_GradientHessian)->Arg(7)->Arg(50)->Arg(200);

}  // namespace
