#include "snl/noise.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace snl {
namespace {

Eigen::Index noise_dim(const SensorNetwork &net) {
  return static_cast<Eigen::Index>(net.ss_edges().size() + net.as_edges().size()) +
         2 * net.num_anchors();
}

VectorXd unit_direction(std::mt19937_64 &rng, Eigen::Index dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  VectorXd v(dim);
  do {
    for (Eigen::Index k = 0; k < dim; ++k) v[k] = gauss(rng);
  } while (v.norm() == 0.0);
  return v / v.norm();
}

}  // namespace

std::string_view to_string(NoiseDistribution d) {
  switch (d) {
    case NoiseDistribution::kUniformBall: return "uniform-ball";
    case NoiseDistribution::kGaussianRejection: return "gaussian-rejection";
  }
  return "uniform-ball";
}

NoiseDistribution parse_distribution(std::string_view name) {
  if (name == "uniform-ball") return NoiseDistribution::kUniformBall;
  if (name == "gaussian-rejection") return NoiseDistribution::kGaussianRejection;
  throw InvalidArgument("unknown noise distribution '" + std::string(name) + "'");
}

NoiseDraw NoiseDraw::zero(const SensorNetwork &net) {
  return {std::vector<double>(net.ss_edges().size(), 0.0),
          std::vector<double>(net.as_edges().size(), 0.0),
          std::vector<Point2>(net.num_anchors(), Point2::Zero())};
}

bool NoiseDraw::matches(const SensorNetwork &net) const {
  return mu.size() == net.ss_edges().size() && e.size() == net.as_edges().size() &&
         epsilon.size() == static_cast<std::size_t>(net.num_anchors());
}

VectorXd NoiseDraw::flat() const {
  const auto ns = static_cast<Eigen::Index>(mu.size());
  const auto na = static_cast<Eigen::Index>(e.size());
  VectorXd v(ns + na + 2 * static_cast<Eigen::Index>(epsilon.size()));
  for (Eigen::Index k = 0; k < ns; ++k) v[k] = mu[k];
  for (Eigen::Index k = 0; k < na; ++k) v[ns + k] = e[k];
  for (std::size_t l = 0; l < epsilon.size(); ++l) {
    v[ns + na + 2 * l] = epsilon[l].x();
    v[ns + na + 2 * l + 1] = epsilon[l].y();
  }
  return v;
}

NoiseDraw NoiseDraw::from_flat(const SensorNetwork &net, const VectorXd &v) {
  if (v.size() != noise_dim(net)) throw InvalidArgument("flat noise vector has wrong size");
  NoiseDraw d = zero(net);
  const auto ns = static_cast<Eigen::Index>(d.mu.size());
  const auto na = static_cast<Eigen::Index>(d.e.size());
  for (Eigen::Index k = 0; k < ns; ++k) d.mu[k] = v[k];
  for (Eigen::Index k = 0; k < na; ++k) d.e[k] = v[ns + k];
  for (std::size_t l = 0; l < d.epsilon.size(); ++l) {
    d.epsilon[l] = Point2(v[ns + na + 2 * l], v[ns + na + 2 * l + 1]);
  }
  return d;
}

double weighted_norm(const NoiseDraw &draw, const NoiseWeights &w) {
  double mu2 = 0.0, e2 = 0.0, eps2 = 0.0;
  for (double m : draw.mu) mu2 += m * m;
  for (double b : draw.e) e2 += b * b;
  for (const Point2 &p : draw.epsilon) eps2 += p.squaredNorm();
  return w.a * mu2 + w.b * e2 + w.c * eps2;
}

VectorXd flat_weights(const SensorNetwork &net, const NoiseWeights &w) {
  const auto ns = static_cast<Eigen::Index>(net.ss_edges().size());
  const auto na = static_cast<Eigen::Index>(net.as_edges().size());
  VectorXd out(noise_dim(net));
  out.head(ns).setConstant(w.a);
  out.segment(ns, na).setConstant(w.b);
  out.tail(2 * net.num_anchors()).setConstant(w.c);
  return out;
}

NoiseDraw draw_noise(const SensorNetwork &net, const NoiseSpec &spec) {
  const NoiseWeights &w = spec.weights;
  if (!(w.a > 0 && w.b > 0 && w.c > 0)) throw InvalidArgument("noise weights must be positive");
  if (!(spec.delta_budget >= 0.0)) throw InvalidArgument("noise budget must be nonnegative");
  if (spec.delta_budget == 0.0) return NoiseDraw::zero(net);

  const Eigen::Index dim = noise_dim(net);
  const VectorXd scale = (spec.delta_budget / flat_weights(net, w).array()).sqrt();
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  for (;;) {
    VectorXd m(dim);
    if (spec.distribution == NoiseDistribution::kUniformBall) {
      const double radius = std::pow(unif(rng), 1.0 / static_cast<double>(dim));
      m = radius * unit_direction(rng, dim);
    } else {
      // Per-coordinate variance 1/dim puts about half the mass inside the ball.
      const double sigma = 1.0 / std::sqrt(static_cast<double>(dim));
      for (Eigen::Index k = 0; k < dim; ++k) m[k] = sigma * gauss(rng);
    }
    NoiseDraw draw = NoiseDraw::from_flat(net, m.cwiseProduct(scale));
    // Rounding can land a sample on the boundary; the budget is strict.
    if (weighted_norm(draw, w) < spec.delta_budget) return draw;
  }
}

NoiseDraw draw_noise_on_boundary(const SensorNetwork &net, const NoiseWeights &w,
                                 double budget, std::uint64_t seed) {
  if (!(budget >= 0.0)) throw InvalidArgument("noise budget must be nonnegative");
  if (budget == 0.0) return NoiseDraw::zero(net);
  std::mt19937_64 rng(seed);
  const VectorXd scale = (budget / flat_weights(net, w).array()).sqrt();
  return NoiseDraw::from_flat(net, unit_direction(rng, noise_dim(net)).cwiseProduct(scale));
}

bool MeasurementSet::matches(const SensorNetwork &net) const {
  return d2_ss.size() == net.ss_edges().size() && d2_as.size() == net.as_edges().size() &&
         anchors_measured.size() == static_cast<std::size_t>(net.num_anchors());
}

MeasurementSet measure(const SensorNetwork &net, const NoiseDraw &draw) {
  if (!draw.matches(net)) throw InvalidArgument("noise draw is not keyed to this network");
  const auto &xs = net.non_anchors_true();
  const auto &xa = net.anchors_true();

  MeasurementSet out;
  out.d2_ss.reserve(net.ss_edges().size());
  for (std::size_t k = 0; k < net.ss_edges().size(); ++k) {
    const Edge &e = net.ss_edges()[k];
    out.d2_ss.push_back((xs[e.first] - xs[e.second]).squaredNorm() + draw.mu[k]);
  }

  out.d2_as.reserve(net.as_edges().size());
  for (std::size_t k = 0; k < net.as_edges().size(); ++k) {
    const Edge &e = net.as_edges()[k];
    const Point2 diff = xs[e.first] - xa[e.second];
    const Point2 &eps = draw.epsilon[e.second];
    const double d_true = diff.norm();
    const double eps_norm = eps.norm();
    double mu_il = draw.e[k];
    if (eps_norm > 0.0) {
      const double cos_theta = std::clamp(diff.dot(eps) / (d_true * eps_norm), -1.0, 1.0);
      mu_il += eps_norm * eps_norm - 2.0 * d_true * eps_norm * cos_theta;
    }
    out.d2_as.push_back(diff.squaredNorm() + mu_il);
  }

  out.anchors_measured.reserve(xa.size());
  for (std::size_t l = 0; l < xa.size(); ++l) {
    out.anchors_measured.push_back(xa[l] + draw.epsilon[l]);
  }
  return out;
}

}  // namespace snl
