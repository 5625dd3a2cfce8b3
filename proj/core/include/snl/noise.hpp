#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "snl/network.hpp"

namespace snl {

// Weights of the noise budget a*|mu|^2 + b*|e|^2 + c*|eps|^2.
// a weights the non-anchor distance errors, b the anchor-edge biases and c
// the anchor position offsets.
struct NoiseWeights {
  double a = 1.0;
  double b = 2.0;
  double c = 1.0;

  friend bool operator==(const NoiseWeights &, const NoiseWeights &) = default;
};

enum class NoiseDistribution { kUniformBall, kGaussianRejection };

std::string_view to_string(NoiseDistribution d);
NoiseDistribution parse_distribution(std::string_view name);

struct NoiseSpec {
  double delta_budget = 0.0;
  NoiseWeights weights;
  NoiseDistribution distribution = NoiseDistribution::kUniformBall;
  std::uint64_t seed = 0;

  friend bool operator==(const NoiseSpec &, const NoiseSpec &) = default;
};

/// One realization of the measurement noise, stored in the owning network's
/// edge order: mu per ss edge, e per as edge, epsilon per anchor.
struct NoiseDraw {
  std::vector<double> mu;
  std::vector<double> e;
  std::vector<Point2> epsilon;

  static NoiseDraw zero(const SensorNetwork &net);
  [[nodiscard]] bool matches(const SensorNetwork &net) const;

  // Flat layout [mu..., e..., eps_1x, eps_1y, ...].
  [[nodiscard]] VectorXd flat() const;
  static NoiseDraw from_flat(const SensorNetwork &net, const VectorXd &v);

  friend bool operator==(const NoiseDraw &, const NoiseDraw &) = default;
};

/// a*|mu|^2 + b*|e|^2 + c*|eps|^2.
double weighted_norm(const NoiseDraw &draw, const NoiseWeights &w);

/// Diagonal of the weighted norm in the flat noise layout.
VectorXd flat_weights(const SensorNetwork &net, const NoiseWeights &w);

/// Draws noise strictly inside the weighted ball of radius spec.delta_budget.
/// Deterministic in spec.seed. A zero budget yields the all-zero draw.
NoiseDraw draw_noise(const SensorNetwork &net, const NoiseSpec &spec);

/// Draw scaled onto the weighted sphere a|mu|^2+b|e|^2+c|eps|^2 = budget.
NoiseDraw draw_noise_on_boundary(const SensorNetwork &net,
                                 const NoiseWeights &w, double budget,
                                 std::uint64_t seed);

/// Noisy inputs handed to the solver.
struct MeasurementSet {
  std::vector<double> d2_ss;  // measured squared distances, ss edge order
  std::vector<double> d2_as;  // measured squared distances, as edge order
  std::vector<Point2> anchors_measured;

  [[nodiscard]] bool matches(const SensorNetwork &net) const;
};

/// Applies a noise draw to the true network.
///
/// For an anchor edge (i, l) the squared-distance error is
///   mu_il = |eps_l|^2 - 2 d_il* |eps_l| cos(theta_il) + e_il,
/// theta_il being the angle between x_i* - x_l* and eps_l, which makes
/// d_il^2 - e_il equal |x_i* - (x_l* + eps_l)|^2.
MeasurementSet measure(const SensorNetwork &net, const NoiseDraw &draw);

}  // namespace snl
