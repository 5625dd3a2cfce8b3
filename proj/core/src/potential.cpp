#include "snl/potential.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "snl/rigidity.hpp"

namespace snl {
namespace {

void check_inputs(const SensorNetwork &net, const MeasurementSet &meas, const VectorXd &x) {
  if (x.size() != 2 * net.num_non_anchors()) {
    throw InvalidArgument("profile must have 2N entries");
  }
  if (!meas.matches(net)) throw InvalidArgument("measurements are not keyed to this network");
}

double square(double v) { return v * v; }

double ss_term(const MeasurementSet &meas, const VectorXd &x, const Edge &e, std::size_t k) {
  return square((node(x, e.first) - node(x, e.second)).squaredNorm() - meas.d2_ss[k]);
}

double as_term(const MeasurementSet &meas, const VectorXd &x, const Edge &e, std::size_t k) {
  return square((node(x, e.first) - meas.anchors_measured[e.second]).squaredNorm() -
                meas.d2_as[k]);
}

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    comp_ += std::abs(sum_) >= std::abs(v) ? (sum_ - t) + v : (v - t) + sum_;
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

double payoff(const SensorNetwork &net, const MeasurementSet &meas, const VectorXd &x, int i) {
  check_inputs(net, meas, x);
  if (i < 0 || i >= net.num_non_anchors()) {
    throw InvalidArgument("player index " + std::to_string(i) + " out of range");
  }
  double total = 0.0;
  const Point2 xi = node(x, i);
  for (std::size_t k = 0; k < net.ss_edges().size(); ++k) {
    const Edge &e = net.ss_edges()[k];
    if (e.first != i && e.second != i) continue;
    const int j = e.first == i ? e.second : e.first;
    total += square((xi - node(x, j)).squaredNorm() - meas.d2_ss[k]);
  }
  for (std::size_t k = 0; k < net.as_edges().size(); ++k) {
    const Edge &e = net.as_edges()[k];
    if (e.first != i) continue;
    total += square((xi - meas.anchors_measured[e.second]).squaredNorm() - meas.d2_as[k]);
  }
  return total;
}

double potential(const SensorNetwork &net, const MeasurementSet &meas, const VectorXd &x) {
  check_inputs(net, meas, x);
  double total = 0.0;
  for (std::size_t k = 0; k < net.ss_edges().size(); ++k) {
    total += ss_term(meas, x, net.ss_edges()[k], k);
  }
  for (std::size_t k = 0; k < net.as_edges().size(); ++k) {
    total += as_term(meas, x, net.as_edges()[k], k);
  }
  return total;
}

VectorXd gradient(const SensorNetwork &net, const MeasurementSet &meas, const VectorXd &x) {
  check_inputs(net, meas, x);
  const Framework fw(net, x);
  const RigidityMatrixSet r = rigidity_matrices(fw, meas);
  return 4.0 * r.revised_reduced.transpose() * residual_vector(fw, meas);
}

MatrixXd hessian(const SensorNetwork &net, const MeasurementSet &meas, const VectorXd &x) {
  return evaluate(net, meas, x).hessian;
}

Derivatives evaluate(const SensorNetwork &net, const MeasurementSet &meas, const VectorXd &x) {
  check_inputs(net, meas, x);
  const Framework fw(net, x);
  const RigidityMatrixSet r = rigidity_matrices(fw, meas);
  const VectorXd rho = residual_vector(fw, meas);
  const MatrixXd lambda = lambda_matrix(rho, net);
  const MatrixXd &rbar = r.revised_reduced;

  Derivatives d;
  d.value = rho.squaredNorm();
  d.gradient = 4.0 * rbar.transpose() * rho;
  MatrixXd lambda_kron = MatrixXd::Zero(2 * lambda.rows(), 2 * lambda.cols());
  for (Eigen::Index a = 0; a < lambda.rows(); ++a) {
    for (Eigen::Index b = 0; b < lambda.cols(); ++b) {
      lambda_kron(2 * a, 2 * b) = lambda(a, b);
      lambda_kron(2 * a + 1, 2 * b + 1) = lambda(a, b);
    }
  }
  d.hessian = 4.0 * (2.0 * rbar.transpose() * rbar - lambda_kron);
  // Symmetrize away the rounding asymmetry of the Gram product.
  d.hessian = 0.5 * (d.hessian + d.hessian.transpose()).eval();
  return d;
}

double check_potential_identity(const SensorNetwork &net, const MeasurementSet &meas,
                                const VectorXd &x, int i, const Point2 &deviation) {
  check_inputs(net, meas, x);
  if (i < 0 || i >= net.num_non_anchors()) {
    throw InvalidArgument("player index " + std::to_string(i) + " out of range");
  }
  VectorXd moved = x;
  set_node(moved, i, node(x, i) + deviation);

  CompensatedSum dphi;
  for (std::size_t k = 0; k < net.ss_edges().size(); ++k) {
    const Edge &e = net.ss_edges()[k];
    dphi.add(ss_term(meas, moved, e, k) - ss_term(meas, x, e, k));
  }
  for (std::size_t k = 0; k < net.as_edges().size(); ++k) {
    const Edge &e = net.as_edges()[k];
    dphi.add(as_term(meas, moved, e, k) - as_term(meas, x, e, k));
  }

  // Player i's own terms, enumerated from its neighbourhood.
  const Point2 xi = node(x, i);
  const Point2 xi_new = node(moved, i);
  CompensatedSum dpay;
  for (std::size_t k = 0; k < net.ss_edges().size(); ++k) {
    const Edge &e = net.ss_edges()[k];
    if (e.first != i && e.second != i) continue;
    const Point2 xj = node(x, e.first == i ? e.second : e.first);
    dpay.add(square((xi_new - xj).squaredNorm() - meas.d2_ss[k]) -
             square((xi - xj).squaredNorm() - meas.d2_ss[k]));
  }
  for (std::size_t k = 0; k < net.as_edges().size(); ++k) {
    const Edge &e = net.as_edges()[k];
    if (e.first != i) continue;
    const Point2 &xl = meas.anchors_measured[e.second];
    dpay.add(square((xi_new - xl).squaredNorm() - meas.d2_as[k]) -
             square((xi - xl).squaredNorm() - meas.d2_as[k]));
  }
  return std::abs(dphi.value() - dpay.value());
}

}  // namespace snl
