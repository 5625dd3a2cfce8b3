#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "snl/fixtures.hpp"
#include "snl/potential.hpp"
#include "snl/rigidity.hpp"

namespace snl {
namespace {

// Non-anchor truth (1, 0) with a single anchor edge to (0, 0): d^2 = 1.
SensorNetwork unit_anchor_net() {
  return SensorNetwork::build({{1, 0}}, {{0, 0}, {10, 0}, {0, 10}}, 1.5);
}

VectorXd jitter(const VectorXd &x, double sigma, std::mt19937_64 &rng) {
  std::normal_distribution<double> g(0.0, sigma);
  VectorXd y = x;
  for (auto &v : y) v += g(rng);
  return y;
}

TEST(Payoff, ZeroAtTruth) {
  const auto net = fixtures::net10();
  const auto meas = measure(net, NoiseDraw::zero(net));
  for (int i = 0; i < net.num_non_anchors(); ++i) {
    EXPECT_NEAR(payoff(net, meas, net.true_profile(), i), 0.0, 1e-24);
  }
}

TEST(Payoff, HandComputed) {
  const auto net = unit_anchor_net();
  ASSERT_EQ(net.as_edges().size(), 1u);
  const auto meas = measure(net, NoiseDraw::zero(net));
  const VectorXd x = (VectorXd(2) << 2, 0).finished();
  EXPECT_DOUBLE_EQ(payoff(net, meas, x, 0), 9.0);
  EXPECT_DOUBLE_EQ(potential(net, meas, x), 9.0);
}

TEST(Payoff, SumOfTermsInvolvingThePlayer) {
  const auto net = fixtures::net10();
  const auto meas = measure(net, draw_noise(net, {0.4, {}, NoiseDistribution::kUniformBall, 1}));
  std::mt19937_64 rng(5);
  const VectorXd x = jitter(net.true_profile(), 0.3, rng);
  for (int i = 0; i < net.num_non_anchors(); ++i) {
    double expect = 0.0;
    for (std::size_t k = 0; k < net.ss_edges().size(); ++k) {
      const Edge &e = net.ss_edges()[k];
      if (e.first != i && e.second != i) continue;
      const double r = (node(x, e.first) - node(x, e.second)).squaredNorm() - meas.d2_ss[k];
      expect += r * r;
    }
    for (std::size_t k = 0; k < net.as_edges().size(); ++k) {
      const Edge &e = net.as_edges()[k];
      if (e.first != i) continue;
      const double r = (node(x, i) - meas.anchors_measured[e.second]).squaredNorm() - meas.d2_as[k];
      expect += r * r;
    }
    EXPECT_NEAR(payoff(net, meas, x, i), expect, 1e-12 * (1.0 + expect));
  }
}

TEST(Potential, MatchesDefinition) {
  const auto net = fixtures::net10();
  const auto meas = measure(net, draw_noise(net, {0.4, {}, NoiseDistribution::kUniformBall, 6}));
  std::mt19937_64 rng(6);
  for (int t = 0; t < 50; ++t) {
    const VectorXd x = jitter(net.true_profile(), 0.5, rng);
    const double ref = oracle::potential_by_definition(net, meas, x);
    EXPECT_NEAR(potential(net, meas, x), ref, 1e-12 * ref);
  }
  EXPECT_NEAR(potential(net, measure(net, NoiseDraw::zero(net)), net.true_profile()), 0.0, 1e-24);
}

TEST(Gradient, HandComputed) {
  const auto net = unit_anchor_net();
  const auto meas = measure(net, NoiseDraw::zero(net));
  const VectorXd g = gradient(net, meas, (VectorXd(2) << 2, 0).finished());
  EXPECT_DOUBLE_EQ(g[0], 24.0);
  EXPECT_DOUBLE_EQ(g[1], 0.0);
}

TEST(Gradient, ZeroAtTruth) {
  const auto net = fixtures::net10();
  const auto meas = measure(net, NoiseDraw::zero(net));
  EXPECT_TRUE(gradient(net, meas, net.true_profile()).isZero(1e-14));
}

TEST(Derivatives, MatchFiniteDifferences) {
  std::mt19937_64 rng(11);
  double grad_err = 0.0, hess_err = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto net = t % 2 ? fixtures::net10() : fixtures::demo5();
    const auto meas =
        measure(net, draw_noise(net, {0.2, NoiseWeights{}, NoiseDistribution::kUniformBall,
                                      static_cast<std::uint64_t>(t)}));
    const VectorXd x = jitter(net.true_profile(), 0.5, rng);
    const auto f = [&](const VectorXd &y) { return oracle::potential_by_definition(net, meas, y); };
    const auto g = [&](const VectorXd &y) { return gradient(net, meas, y); };
    const Derivatives d = evaluate(net, meas, x);
    const VectorXd fd = oracle::central_difference(f, x, 1e-5);
    const MatrixXd fh = oracle::central_jacobian(g, x, 1e-5);
    grad_err = std::max(grad_err, (fd - d.gradient).norm() / std::max(1.0, fd.norm()));
    hess_err = std::max(hess_err, (fh - d.hessian).norm() / std::max(1.0, fh.norm()));
    EXPECT_DOUBLE_EQ(d.value, potential(net, meas, x));
  }
  EXPECT_LE(grad_err, 1e-6);
  EXPECT_LE(hess_err, 1e-5);
}

TEST(Hessian, MatchesMatrixForm) {
  // 4 (2 Rbar^T Rbar - Lambda (x) I2) assembled from the rigidity module.
  const auto net = fixtures::net10();
  const auto meas = measure(net, draw_noise(net, {0.5, {}, NoiseDistribution::kUniformBall, 9}));
  std::mt19937_64 rng(9);
  const VectorXd x = jitter(net.true_profile(), 0.2, rng);
  const Framework fw(net, x);
  const MatrixXd rbar = rigidity_matrices(fw, meas).revised_reduced;
  const MatrixXd lam = lambda_matrix(residual_vector(fw, meas), net);
  MatrixXd kron = MatrixXd::Zero(2 * lam.rows(), 2 * lam.cols());
  for (Eigen::Index r = 0; r < lam.rows(); ++r) {
    for (Eigen::Index c = 0; c < lam.cols(); ++c) {
      kron(2 * r, 2 * c) = lam(r, c);
      kron(2 * r + 1, 2 * c + 1) = lam(r, c);
    }
  }
  const MatrixXd expect = 4.0 * (2.0 * rbar.transpose() * rbar - kron);
  EXPECT_TRUE(hessian(net, meas, x).isApprox(expect, 1e-12));
  EXPECT_TRUE(gradient(net, meas, x)
                  .isApprox(4.0 * rbar.transpose() * residual_vector(fw, meas), 1e-12));
}

TEST(Hessian, PositiveDefiniteAtTruthOnRigidScenario) {
  for (const auto &net : {fixtures::demo5(), fixtures::net10(), fixtures::trilateration()}) {
    const auto meas = measure(net, NoiseDraw::zero(net));
    const Eigen::SelfAdjointEigenSolver<MatrixXd> eig(hessian(net, meas, net.true_profile()));
    EXPECT_GT(eig.eigenvalues().minCoeff(), 1e-3 * eig.eigenvalues().maxCoeff());
  }
}

TEST(Hessian, SingularAtTruthOnFlexibleScenario) {
  const auto net = fixtures::four_bar();
  const auto meas = measure(net, NoiseDraw::zero(net));
  const Eigen::SelfAdjointEigenSolver<MatrixXd> eig(hessian(net, meas, net.true_profile()));
  EXPECT_LE(std::abs(eig.eigenvalues().minCoeff()), 1e-8 * eig.eigenvalues().maxCoeff());
}

TEST(PotentialIdentity, ZeroDeviationIsExactlyZero) {
  const auto net = fixtures::net10();
  const auto meas = measure(net, draw_noise(net, {0.4, {}, NoiseDistribution::kUniformBall, 1}));
  for (int i = 0; i < net.num_non_anchors(); ++i) {
    EXPECT_EQ(check_potential_identity(net, meas, net.true_profile(), i, Point2::Zero()), 0.0);
  }
}

double identity_gap_by_difference(const SensorNetwork &net, const MeasurementSet &meas,
                                  const VectorXd &x, int i, const Point2 &dev) {
  VectorXd y = x;
  set_node(y, i, node(x, i) + dev);
  const double dphi = oracle::potential_by_definition(net, meas, y) -
                      oracle::potential_by_definition(net, meas, x);
  const double dj = payoff(net, meas, y, i) - payoff(net, meas, x, i);
  return std::abs(dphi - dj);
}

TEST(PotentialIdentity, RandomDeviations) {
  const auto net = fixtures::net10();
  const auto meas = measure(net, draw_noise(net, {0.4, {}, NoiseDistribution::kUniformBall, 2}));
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> player(0, net.num_non_anchors() - 1);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    const VectorXd x = jitter(net.true_profile(), 1.0, rng);
    const int i = player(rng);
    const double gx = g(rng);
    const Point2 dev(gx, g(rng));
    const double scale = 1.0 + potential(net, meas, x);
    EXPECT_LE(check_potential_identity(net, meas, x, i, dev) / scale, 1e-12);
    EXPECT_LE(identity_gap_by_difference(net, meas, x, i, dev) / scale, 1e-12);
  }
}

TEST(PotentialIdentity, LargeDeviations) {
  const auto net = fixtures::net10();
  const auto meas = measure(net, draw_noise(net, {0.4, {}, NoiseDistribution::kUniformBall, 3}));
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
  for (int t = 0; t < 100; ++t) {
    const VectorXd x = jitter(net.true_profile(), 1.0, rng);
    const int i = t % net.num_non_anchors();
    const double a = angle(rng);
    const Point2 dev = 1e3 * Point2(std::cos(a), std::sin(a));
    VectorXd y = x;
    set_node(y, i, node(x, i) + dev);
    const double scale = 1.0 + potential(net, meas, x) + potential(net, meas, y);
    EXPECT_LE(check_potential_identity(net, meas, x, i, dev) / scale, 1e-9);
  }
}

}  // namespace
}  // namespace snl
