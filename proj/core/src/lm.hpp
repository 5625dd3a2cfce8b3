#pragma once

// Internal minimizers for Phi = |rho|^2 over a feasible set. Not installed.

#include <optional>

#include "snl/network.hpp"
#include "snl/noise.hpp"

namespace snl::detail {

class Constraint {
 public:
  virtual ~Constraint() = default;
  // Maps a trial point onto the feasible set.
  virtual void project(VectorXd &x) const = 0;
  // Unit normal of an active curved boundary at x, pointing into the
  // feasible set. Empty when no curved boundary is active.
  virtual std::optional<VectorXd> active_normal(const VectorXd &) const { return {}; }
  // Pulls a tangent step back onto the active curved boundary.
  virtual void retract(VectorXd &x) const { project(x); }
  // Gradient with the components blocked by active constraints removed.
  virtual VectorXd projected_gradient(const VectorXd &x, const VectorXd &g) const;
};

class Unconstrained final : public Constraint {
 public:
  void project(VectorXd &) const override {}
};

// Every node confined to the same axis-aligned box.
class NodeBox final : public Constraint {
 public:
  explicit NodeBox(const Box &box) : box_(box) {}
  void project(VectorXd &x) const override;
  VectorXd projected_gradient(const VectorXd &x, const VectorXd &g) const override;

 private:
  Box box_;
};

// r2_min <= |x - center|^2 <= r2_max.
class Annulus final : public Constraint {
 public:
  Annulus(VectorXd center, double r2_min, double r2_max)
      : center_(std::move(center)), r2_min_(r2_min), r2_max_(r2_max) {}
  void project(VectorXd &x) const override;
  std::optional<VectorXd> active_normal(const VectorXd &x) const override;
  void retract(VectorXd &x) const override;
  VectorXd projected_gradient(const VectorXd &x, const VectorXd &g) const override;

 private:
  VectorXd center_;
  double r2_min_;
  double r2_max_;
};

struct MinimizeSettings {
  int max_iterations = 500;
  double grad_tolerance = 1e-9;
  double step_tolerance = 1e-14;
};

struct MinimizeResult {
  VectorXd x;
  double value = 0.0;
  double grad_inf_norm = 0.0;  // of the projected gradient
  int iterations = 0;
  bool converged = false;  // projected gradient below tolerance
};

/// Levenberg-Marquardt on rho with Jacobian 2 * Rbar_r. Accepted steps
/// strictly decrease Phi. On an active curved boundary the step is taken in
/// the tangent space and retracted.
MinimizeResult levenberg_marquardt(const SensorNetwork &net, const MeasurementSet &meas,
                                   VectorXd x0, const Constraint &constraint,
                                   const MinimizeSettings &settings);

/// Projected gradient descent with Armijo backtracking.
MinimizeResult gradient_descent_armijo(const SensorNetwork &net, const MeasurementSet &meas,
                                       VectorXd x0, const Constraint &constraint,
                                       const MinimizeSettings &settings);

}  // namespace snl::detail
