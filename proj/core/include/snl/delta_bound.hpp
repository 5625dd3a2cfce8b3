#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "snl/network.hpp"
#include "snl/noise.hpp"

namespace snl {

/// (1, 2, 32 * d_max^2) with d_max the longest true anchor edge. These are
/// the floor values; a is the weight on mu, b on e and c on epsilon.
NoiseWeights noise_weights(const SensorNetwork &net);

/// 4 * squared diameter of the scenario bounding box.
double default_outer_radius(const SensorNetwork &net);

struct DeltaOptions {
  int sphere_starts = 48;   // starts on the inner sphere |x - x*|^2 = delta1
  int annulus_starts = 48;  // uniform in radius over the annulus
  int max_iterations = 500;
  double grad_tolerance = 1e-9;
  int bcd_iterations = 100;     // alternations for the joint problem
  int hessian_samples = 32;     // noise draws checked per delta1
  double bisection_tolerance = 1e-3;  // relative, on delta2
  double min_delta1 = 1e-12;
  std::optional<double> outer_radius;
  std::uint64_t seed = 0;
  int threads = 1;
};

/// Best point found for one of the two annulus problems.
struct PhiEstimate {
  double value = 0.0;
  VectorXd x;
  NoiseDraw noise;  // zero for the noiseless problem
  int starts = 0;
  int converged = 0;
  std::string warning;  // set when the scenario is not globally rigid
};

/// min of the noiseless potential over delta1 <= |x - x*|^2 <= R. Flexible
/// scenarios are not rejected here: the value comes back near zero together
/// with a warning.
PhiEstimate phi1(const SensorNetwork &net, double delta1, double outer_radius,
                 const DeltaOptions &opts);

/// Joint minimum over the same annulus and all noise with weighted norm at
/// most delta2. Extra warm starts (x, noise) are scaled into the noise ball.
PhiEstimate phi2(const SensorNetwork &net, double delta1, double delta2, double outer_radius,
                 const NoiseWeights &weights, const DeltaOptions &opts,
                 const std::vector<PhiEstimate> &warm_starts = {});

/// phi2 on an increasing grid of delta2, each run warm-started from the
/// previous one.
std::vector<PhiEstimate> phi2_profile(const SensorNetwork &net, double delta1,
                                      const std::vector<double> &delta2_grid,
                                      double outer_radius, const NoiseWeights &weights,
                                      const DeltaOptions &opts);

struct DeltaTraceEntry {
  std::string stage;  // "hessian", "phi1", "phi2"
  double delta1 = 0.0;
  double delta2 = 0.0;
  double value = 0.0;
  int runs = 0;
  int passed = 0;
  friend bool operator==(const DeltaTraceEntry &, const DeltaTraceEntry &) = default;
};

struct DeltaReport {
  double delta1 = 0.0;
  double phi1 = 0.0;
  double delta2 = 0.0;
  double phi2 = 0.0;
  double delta = 0.0;
  NoiseWeights weights;
  bool hessian_pd_verified = false;
  double outer_radius = 0.0;
  int halvings = 0;
  std::string weight_convention;
  std::vector<DeltaTraceEntry> trace;
  friend bool operator==(const DeltaReport &, const DeltaReport &) = default;
};

inline constexpr const char *kWeightConvention =
    "a:mu b:e c:epsilon, floors (1, 2, 32*dmax^2)";

/// Certifies a noise budget. Halves delta1 until the Hessian at the solution
/// is positive definite for every sampled draw, then picks delta2 and
/// returns delta = min(delta2, phi1 / 2). Phi values are upper estimates of
/// non-convex minima.
///
/// Throws RigidityError when delta1 drops below opts.min_delta1.
DeltaReport delta_bound(const SensorNetwork &net, double delta1_init, const DeltaOptions &opts);

/// Strict: a|mu|^2 + b|e|^2 + c|eps|^2 < delta.
bool noise_budget_check(const NoiseDraw &draw, const NoiseWeights &weights, double delta);

}  // namespace snl
