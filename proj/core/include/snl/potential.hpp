#pragma once

#include "snl/network.hpp"
#include "snl/noise.hpp"

namespace snl {

// Value, gradient and Hessian of the potential at one profile.
struct Derivatives {
  double value = 0.0;
  VectorXd gradient;
  MatrixXd hessian;
};

/// Player i's payoff: sum over its non-anchor neighbours j of
/// (|x_i - x_j|^2 - d_ij^2)^2 plus the same over its anchor neighbours, using
/// the measured anchor positions.
double payoff(const SensorNetwork &net, const MeasurementSet &meas, const VectorXd &x, int i);

/// Sum of squared residuals over the ss and as edges. aa edges do not depend
/// on x and are left out.
double potential(const SensorNetwork &net, const MeasurementSet &meas, const VectorXd &x);

/// 4 * Rbar_r^T * rho.
VectorXd gradient(const SensorNetwork &net, const MeasurementSet &meas, const VectorXd &x);

/// 4 * (2 * Rbar_r^T Rbar_r - Lambda (x) I_2).
MatrixXd hessian(const SensorNetwork &net, const MeasurementSet &meas, const VectorXd &x);

Derivatives evaluate(const SensorNetwork &net, const MeasurementSet &meas, const VectorXd &x);

/// |(Phi(x_i', x_-i) - Phi(x)) - (J_i(x_i', x_-i) - J_i(x))| with
/// x_i' = x_i + deviation. Both changes are accumulated term by term so that
/// large deviations do not lose the difference to cancellation.
double check_potential_identity(const SensorNetwork &net, const MeasurementSet &meas,
                                const VectorXd &x, int i, const Point2 &deviation);

}  // namespace snl
