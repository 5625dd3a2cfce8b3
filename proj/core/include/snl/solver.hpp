#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "snl/network.hpp"
#include "snl/noise.hpp"

namespace snl {

enum class Method { kLevenbergMarquardt, kGradientDescentArmijo };
std::string_view to_string(Method m);
Method parse_method(std::string_view name);

enum class Classification { kLocalNE, kSaddle, kIndeterminate };
std::string_view to_string(Classification c);
Classification parse_classification(std::string_view name);

struct SolveOptions {
  int starts = 64;
  int max_iterations = 500;
  double grad_tolerance = 1e-9;   // on |grad Phi|_inf
  double step_tolerance = 1e-14;  // relative, on |dx|_inf
  std::uint64_t seed = 0;
  std::optional<Box> init_box;  // random starts; defaults to the scenario bounding box
  std::optional<Box> omega;     // per-node feasible box; defaults to 2x the bounding box
  Method method = Method::kLevenbergMarquardt;
  int threads = 1;
};

struct StationaryPoint {
  VectorXd x;
  double value = 0.0;
  double grad_inf_norm = 0.0;
  double min_hess_eigenvalue = 0.0;
  double max_hess_eigenvalue = 0.0;
  Classification classification = Classification::kIndeterminate;
  int iterations = 0;
  int start_index = 0;
  bool converged = false;
};

struct SolveResult {
  StationaryPoint best;
  std::vector<StationaryPoint> distinct;   // deduplicated, best first
  std::vector<StationaryPoint> per_start;  // in start order
  double globally_unique_evidence = 0.0;   // fraction of starts that reached best
  double mle = 0.0;

  [[nodiscard]] bool any_converged() const;
};

inline constexpr double kDedupTolerance = 1e-6;
inline constexpr double kTieTolerance = 1e-12;
inline constexpr double kPsdTolerance = 1e-8;

/// Local NE iff the smallest Hessian eigenvalue exceeds 1e-8 * (1 + max
/// eigenvalue), saddle iff it is below the negated threshold.
Classification classify_eigenvalues(double min_eig, double max_eig);
Classification classify_stationary(const SensorNetwork &net, const MeasurementSet &meas,
                                   const VectorXd &x);

/// Descends from x0 inside the feasible box. Points that stop before the
/// gradient tolerance is met are reported with classification
/// indeterminate and converged == false.
StationaryPoint local_minimize(const SensorNetwork &net, const MeasurementSet &meas,
                               const VectorXd &x0, const SolveOptions &opts);

/// Start 0 places every non-anchor at the centroid of its measured anchor
/// neighbours; the rest are uniform in the init box.
std::vector<VectorXd> initial_points(const SensorNetwork &net, const MeasurementSet &meas,
                                     const SolveOptions &opts);

/// Runs local_minimize from every start and aggregates in start order, so the
/// result does not depend on the thread count.
SolveResult multistart_solve(const SensorNetwork &net, const MeasurementSet &meas,
                             const SolveOptions &opts);

/// (1/N) * sqrt(sum_i |x_i - x_i*|^2).
double mean_localization_error(const VectorXd &x, const VectorXd &x_true);

Box default_omega(const SensorNetwork &net);

}  // namespace snl
