#include <gtest/gtest.h>

#include "oracles.hpp"
#include "snl/fixtures.hpp"
#include "snl/potential.hpp"
#include "snl/solver.hpp"

namespace snl {
namespace {

// One non-anchor at (1, 1) over nearly collinear anchors. Its mirror image
// across the anchor baseline holds a spurious local minimum, with a saddle
// in between.
SensorNetwork flip_fixture() {
  return SensorNetwork::build({{1.0, 1.0}}, {{0, 0}, {2, 0}, {1, 0.3}}, 1.5);
}

SolveOptions wide_box(SolveOptions opts = {}) {
  opts.omega = Box{{-3, -3}, {5, 5}};
  return opts;
}

TEST(MeanLocalizationError, HandComputed) {
  const VectorXd t = VectorXd::Zero(2);
  EXPECT_EQ(mean_localization_error(t, t), 0.0);
  EXPECT_DOUBLE_EQ(mean_localization_error((VectorXd(2) << 1, 1).finished(), t),
                   std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(mean_localization_error((VectorXd(4) << 0.3, 0.4, 0, 0).finished(),
                                           VectorXd::Zero(4)),
                   0.25);
}

TEST(Classify, ThresholdBand) {
  EXPECT_EQ(classify_eigenvalues(1e-6, 1.0), Classification::kLocalNE);
  EXPECT_EQ(classify_eigenvalues(-1e-6, 1.0), Classification::kSaddle);
  EXPECT_EQ(classify_eigenvalues(1e-9, 1.0), Classification::kIndeterminate);
  EXPECT_EQ(classify_eigenvalues(-1e-9, 1.0), Classification::kIndeterminate);
  EXPECT_EQ(classify_eigenvalues(0.0, 0.0), Classification::kIndeterminate);
}

TEST(Classify, Names) {
  for (auto c : {Classification::kLocalNE, Classification::kSaddle,
                 Classification::kIndeterminate}) {
    EXPECT_EQ(parse_classification(to_string(c)), c);
  }
  EXPECT_EQ(parse_method("lm"), Method::kLevenbergMarquardt);
  EXPECT_EQ(parse_method(to_string(Method::kGradientDescentArmijo)),
            Method::kGradientDescentArmijo);
  EXPECT_THROW(parse_method("newton"), InvalidArgument);
}

TEST(LocalMinimize, StartAtTruth) {
  const auto net = fixtures::net10();
  const auto meas = measure(net, NoiseDraw::zero(net));
  const auto p = local_minimize(net, meas, net.true_profile(), {});
  EXPECT_LE(p.iterations, 1);
  EXPECT_LE(p.value, 1e-20);
  EXPECT_TRUE(p.converged);
  EXPECT_EQ(p.classification, Classification::kLocalNE);
}

TEST(LocalMinimize, TrilaterationFromFarCorner) {
  const auto net = fixtures::trilateration();
  const auto meas = measure(net, NoiseDraw::zero(net));
  for (auto method : {Method::kLevenbergMarquardt, Method::kGradientDescentArmijo}) {
    SolveOptions opts;
    opts.method = method;
    opts.max_iterations = 20000;
    const auto p = local_minimize(net, meas, (VectorXd(2) << 0.9, 0.9).finished(), opts);
    EXPECT_TRUE(p.converged) << to_string(method);
    EXPECT_NEAR(p.x[0], 0.3, 1e-8) << to_string(method);
    EXPECT_NEAR(p.x[1], 0.4, 1e-8) << to_string(method);
  }
}

TEST(LocalMinimize, TrilaterationAgreesWithGridOracle) {
  const auto net = fixtures::trilateration();
  const auto meas = measure(net, draw_noise(net, {0.01, {}, NoiseDistribution::kUniformBall, 3}));
  const auto f = [&](const Point2 &p) {
    return oracle::potential_by_definition(net, meas, (VectorXd(2) << p.x(), p.y()).finished());
  };
  const auto grid = oracle::grid_minimize(f, {{-0.5, -0.5}, {1.5, 1.5}}, 1e-3);
  const auto res = multistart_solve(net, meas, {});
  EXPECT_LE(res.best.value, grid.value + 1e-12);
  EXPECT_LE((node(res.best.x, 0) - grid.x).lpNorm<Eigen::Infinity>(), 2e-3);
}

TEST(LocalMinimize, NeverIncreasesThePotential) {
  const auto net = fixtures::net10();
  const auto meas = measure(net, draw_noise(net, {0.3, {}, NoiseDistribution::kUniformBall, 4}));
  SolveOptions opts;
  opts.seed = 4;
  opts.starts = 16;
  const auto starts = initial_points(net, meas, opts);
  for (auto method : {Method::kLevenbergMarquardt, Method::kGradientDescentArmijo}) {
    opts.method = method;
    for (const auto &x0 : starts) {
      EXPECT_LE(local_minimize(net, meas, x0, opts).value, potential(net, meas, x0));
    }
  }
}

TEST(LocalMinimize, StaysInsideTheFeasibleBox) {
  // The default box cuts off the mirror image of the flip fixture.
  const auto net = flip_fixture();
  const auto meas = measure(net, NoiseDraw::zero(net));
  const auto p = local_minimize(net, meas, (VectorXd(2) << 1.0, -0.4).finished(), {});
  EXPECT_TRUE(default_omega(net).contains(node(p.x, 0)));
}

TEST(FlipFixture, ReflectedStartIsCapturedByASpuriousMinimum) {
  const auto net = flip_fixture();
  const auto meas = measure(net, NoiseDraw::zero(net));
  const auto p = local_minimize(net, meas, (VectorXd(2) << 1.0, -1.0).finished(), wide_box());
  EXPECT_TRUE(p.converged);
  EXPECT_EQ(p.classification, Classification::kLocalNE);
  EXPECT_GT(p.value, 0.5);
  EXPECT_LT(p.x[1], 0.0);
  EXPECT_GT((p.x - net.true_profile()).norm(), 1.0);
}

TEST(FlipFixture, SaddleBetweenTheMinima) {
  const auto net = flip_fixture();
  const auto meas = measure(net, NoiseDraw::zero(net));
  const auto spurious =
      local_minimize(net, meas, (VectorXd(2) << 1.0, -1.0).finished(), wide_box());
  // Newton on the gradient from the midpoint.
  VectorXd x = 0.5 * (spurious.x + net.true_profile());
  for (int it = 0; it < 50; ++it) x -= hessian(net, meas, x).ldlt().solve(gradient(net, meas, x));
  EXPECT_LE(gradient(net, meas, x).lpNorm<Eigen::Infinity>(), 1e-10);
  EXPECT_EQ(classify_stationary(net, meas, x), Classification::kSaddle);
  EXPECT_EQ(classify_stationary(net, meas, net.true_profile()), Classification::kLocalNE);
}

TEST(FlipFixture, MultistartFindsTheTruth) {
  const auto net = flip_fixture();
  const auto meas = measure(net, NoiseDraw::zero(net));
  SolveOptions opts = wide_box();
  opts.init_box = Box{{-1, -2}, {3, 2}};
  const auto res = multistart_solve(net, meas, opts);
  EXPECT_LE(res.best.value, 1e-12);
  EXPECT_LE(res.mle, 1e-6);
  EXPECT_GE(res.distinct.size(), 2u);
  EXPECT_LT(res.globally_unique_evidence, 1.0);
}

TEST(Multistart, ZeroNoiseRecoversTruth) {
  for (const auto &net : {fixtures::demo5(), fixtures::net10()}) {
    const auto meas = measure(net, NoiseDraw::zero(net));
    const auto res = multistart_solve(net, meas, {});
    EXPECT_LE((res.best.x - net.true_profile()).lpNorm<Eigen::Infinity>(), 1e-6);
    EXPECT_LE(res.best.value, 1e-12);
    EXPECT_EQ(res.best.classification, Classification::kLocalNE);
    EXPECT_EQ(res.per_start.size(), 64u);
    EXPECT_TRUE(res.any_converged());
    EXPECT_EQ(res.distinct.front().x, res.best.x);
  }
}

TEST(Multistart, FlexibleScenarioHasManyMinima) {
  const auto net = fixtures::four_bar();
  const auto meas = measure(net, NoiseDraw::zero(net));
  const auto res = multistart_solve(net, meas, {});
  int zero_minima = 0;
  for (const auto &p : res.distinct) zero_minima += p.value <= 1e-12;
  EXPECT_GE(zero_minima, 2);
  EXPECT_LT(res.globally_unique_evidence, 1.0);
}

TEST(Multistart, DeterministicAndThreadIndependent) {
  const auto net = fixtures::net10();
  const auto meas = measure(net, draw_noise(net, {0.5, {}, NoiseDistribution::kUniformBall, 8}));
  SolveOptions opts;
  opts.seed = 8;
  opts.starts = 24;
  const auto a = multistart_solve(net, meas, opts);
  opts.threads = 4;
  const auto b = multistart_solve(net, meas, opts);
  ASSERT_EQ(a.per_start.size(), b.per_start.size());
  for (std::size_t k = 0; k < a.per_start.size(); ++k) {
    EXPECT_EQ(a.per_start[k].x, b.per_start[k].x);
    EXPECT_EQ(a.per_start[k].value, b.per_start[k].value);
  }
  EXPECT_EQ(a.best.x, b.best.x);
  EXPECT_EQ(a.mle, b.mle);
  EXPECT_EQ(a.globally_unique_evidence, b.globally_unique_evidence);
}

TEST(Multistart, BestIsLowestValueWithEarliestTie) {
  const auto net = fixtures::demo5();
  const auto meas = measure(net, draw_noise(net, {0.1, {}, NoiseDistribution::kUniformBall, 2}));
  const auto res = multistart_solve(net, meas, {});
  for (const auto &p : res.per_start) {
    EXPECT_GE(p.value, res.best.value - kTieTolerance);
    if (p.value <= res.best.value + kTieTolerance) {
      EXPECT_GE(p.start_index, res.best.start_index);
    }
  }
}

TEST(InitialPoints, SeededAndInsideTheBox) {
  const auto net = fixtures::net10();
  const auto meas = measure(net, NoiseDraw::zero(net));
  SolveOptions opts;
  opts.seed = 5;
  opts.starts = 10;
  const auto a = initial_points(net, meas, opts);
  EXPECT_EQ(a, initial_points(net, meas, opts));
  ASSERT_EQ(a.size(), 10u);
  const Box box = net.bounding_box();
  for (std::size_t k = 1; k < a.size(); ++k) {
    for (int i = 0; i < net.num_non_anchors(); ++i) EXPECT_TRUE(box.contains(node(a[k], i)));
  }
}

}  // namespace
}  // namespace snl
