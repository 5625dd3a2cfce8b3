#include "lm.hpp"

#include <algorithm>
#include <cmath>

#include "snl/potential.hpp"
#include "snl/rigidity.hpp"

namespace snl::detail {
namespace {

constexpr double kBoundaryRelTol = 1e-10;
constexpr double kLambdaMax = 1e20;

struct LocalModel {
  VectorXd rho;
  MatrixXd jac;  // d rho / d x
  double value = 0.0;
  VectorXd grad;
};

LocalModel linearize(const SensorNetwork &net, const MeasurementSet &meas, const VectorXd &x) {
  const Framework fw(net, x);
  LocalModel m;
  m.rho = residual_vector(fw, meas);
  m.jac = 2.0 * rigidity_matrices(fw, meas).revised_reduced;
  m.value = m.rho.squaredNorm();
  m.grad = 2.0 * m.jac.transpose() * m.rho;
  return m;
}

bool all_finite(const VectorXd &v) { return v.allFinite(); }

// Phi(x) - Phi(y) as sum (rho - rho')(rho + rho'), with rho - rho' formed from
// coordinate differences. Near a minimum this keeps its sign where the
// difference of two separately rounded Phi values does not.
double reduction(const SensorNetwork &net, const MeasurementSet &meas, const VectorXd &x,
                 const VectorXd &y, const VectorXd &rho_x, const VectorXd &rho_y) {
  const VectorXd dx = x - y;
  double sum = 0.0;
  Eigen::Index row = 0;
  for (const Edge &e : net.ss_edges()) {
    const Point2 a = node(x, e.first) - node(x, e.second);
    const Point2 b = node(y, e.first) - node(y, e.second);
    const double drho = (node(dx, e.first) - node(dx, e.second)).dot(a + b);
    sum += drho * (rho_x[row] + rho_y[row]);
    ++row;
  }
  for (const Edge &e : net.as_edges()) {
    const Point2 &anchor = meas.anchors_measured[e.second];
    const Point2 a = node(x, e.first) - anchor;
    const Point2 b = node(y, e.first) - anchor;
    const double drho = node(dx, e.first).dot(a + b);
    sum += drho * (rho_x[row] + rho_y[row]);
    ++row;
  }
  return sum;
}

}  // namespace

VectorXd Constraint::projected_gradient(const VectorXd &, const VectorXd &g) const { return g; }

void NodeBox::project(VectorXd &x) const {
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const int axis = static_cast<int>(k % 2);
    x[k] = std::clamp(x[k], box_.lo[axis], box_.hi[axis]);
  }
}

VectorXd NodeBox::projected_gradient(const VectorXd &x, const VectorXd &g) const {
  VectorXd pg = g;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const int axis = static_cast<int>(k % 2);
    if ((x[k] <= box_.lo[axis] && g[k] > 0.0) || (x[k] >= box_.hi[axis] && g[k] < 0.0)) {
      pg[k] = 0.0;
    }
  }
  return pg;
}

void Annulus::project(VectorXd &x) const {
  VectorXd d = x - center_;
  const double r2 = d.squaredNorm();
  if (r2 < r2_min_) {
    if (r2 == 0.0) {
      d.setZero();
      d[0] = 1.0;
    } else {
      d /= std::sqrt(r2);
    }
    x = center_ + std::sqrt(r2_min_) * d;
  } else if (r2 > r2_max_) {
    x = center_ + std::sqrt(r2_max_ / r2) * d;
  }
}

std::optional<VectorXd> Annulus::active_normal(const VectorXd &x) const {
  const VectorXd d = x - center_;
  const double r2 = d.squaredNorm();
  if (r2 == 0.0) return {};
  if (std::abs(r2 - r2_min_) <= kBoundaryRelTol * r2_min_) return VectorXd(d / std::sqrt(r2));
  if (std::abs(r2 - r2_max_) <= kBoundaryRelTol * r2_max_) return VectorXd(-d / std::sqrt(r2));
  return {};
}

void Annulus::retract(VectorXd &x) const {
  const VectorXd d = x - center_;
  const double r2 = d.squaredNorm();
  if (r2 == 0.0) {
    project(x);
    return;
  }
  const double target = std::abs(r2 - r2_min_) <= std::abs(r2 - r2_max_) ? r2_min_ : r2_max_;
  x = center_ + std::sqrt(target / r2) * d;
}

VectorXd Annulus::projected_gradient(const VectorXd &x, const VectorXd &g) const {
  const auto n = active_normal(x);
  // Moving along n stays feasible; a gradient with g.n >= 0 is held by the
  // boundary, leaving only its tangential part.
  if (n && g.dot(*n) >= 0.0) return g - g.dot(*n) * *n;
  return g;
}

MinimizeResult levenberg_marquardt(const SensorNetwork &net, const MeasurementSet &meas,
                                   VectorXd x0, const Constraint &constraint,
                                   const MinimizeSettings &settings) {
  constraint.project(x0);
  MinimizeResult out;
  out.x = std::move(x0);
  LocalModel model = linearize(net, meas, out.x);
  const Eigen::Index dim = out.x.size();

  MatrixXd jtj = model.jac.transpose() * model.jac;
  double lambda = std::max(1e-3 * jtj.diagonal().maxCoeff(), 1e-12);

  auto finish = [&](int iterations) {
    out.value = model.value;
    out.grad_inf_norm = constraint.projected_gradient(out.x, model.grad).lpNorm<Eigen::Infinity>();
    out.iterations = iterations;
    out.converged = out.grad_inf_norm <= settings.grad_tolerance;
    return out;
  };

  for (int it = 0; it < settings.max_iterations; ++it) {
    const double pg = constraint.projected_gradient(out.x, model.grad).lpNorm<Eigen::Infinity>();
    if (pg <= settings.grad_tolerance || model.value == 0.0) return finish(it);

    const VectorXd jtr = model.jac.transpose() * model.rho;
    MatrixXd system = jtj;
    system.diagonal().array() += lambda;
    VectorXd step = system.ldlt().solve(-jtr);

    VectorXd trial;
    const auto normal = constraint.active_normal(out.x);
    if (normal && step.dot(*normal) < 0.0) {
      const MatrixXd proj = MatrixXd::Identity(dim, dim) - *normal * normal->transpose();
      MatrixXd tsys = proj * jtj * proj;
      tsys.diagonal().array() += lambda;
      step = proj * tsys.ldlt().solve(-proj * jtr);
      trial = out.x + step;
      constraint.retract(trial);
    } else {
      trial = out.x + step;
      constraint.project(trial);
    }

    if (all_finite(trial)) {
      LocalModel next = linearize(net, meas, trial);
      if (reduction(net, meas, out.x, trial, model.rho, next.rho) > 0.0) {
        const double moved = (trial - out.x).lpNorm<Eigen::Infinity>();
        out.x = std::move(trial);
        model = std::move(next);
        jtj = model.jac.transpose() * model.jac;
        lambda = std::max(lambda / 10.0, 1e-15);
        if (moved <= settings.step_tolerance * (1.0 + out.x.lpNorm<Eigen::Infinity>())) {
          return finish(it + 1);
        }
        continue;
      }
    }
    lambda *= 10.0;
    if (lambda > kLambdaMax * (1.0 + jtj.diagonal().maxCoeff())) return finish(it + 1);
  }
  return finish(settings.max_iterations);
}

MinimizeResult gradient_descent_armijo(const SensorNetwork &net, const MeasurementSet &meas,
                                       VectorXd x0, const Constraint &constraint,
                                       const MinimizeSettings &settings) {
  constexpr double kArmijo = 1e-4;
  constraint.project(x0);
  MinimizeResult out;
  out.x = std::move(x0);
  double value = potential(net, meas, out.x);
  VectorXd grad = gradient(net, meas, out.x);
  double t = 1.0 / std::max(1.0, grad.lpNorm<Eigen::Infinity>());

  int it = 0;
  while (it < settings.max_iterations) {
    if (constraint.projected_gradient(out.x, grad).lpNorm<Eigen::Infinity>() <=
        settings.grad_tolerance) {
      break;
    }
    double moved = -1.0;
    for (int bt = 0; bt < 80 && moved < 0.0; ++bt) {
      VectorXd trial = out.x - t * grad;
      constraint.project(trial);
      const double tv = potential(net, meas, trial);
      if (std::isfinite(tv) && tv < value && tv <= value + kArmijo * grad.dot(trial - out.x)) {
        moved = (trial - out.x).lpNorm<Eigen::Infinity>();
        out.x = std::move(trial);
        value = tv;
        grad = gradient(net, meas, out.x);
        t *= 2.0;
      } else {
        t *= 0.5;
      }
    }
    if (moved < 0.0) break;
    ++it;
    if (moved <= settings.step_tolerance * (1.0 + out.x.lpNorm<Eigen::Infinity>())) break;
  }
  out.value = value;
  out.grad_inf_norm = constraint.projected_gradient(out.x, grad).lpNorm<Eigen::Infinity>();
  out.iterations = it;
  out.converged = out.grad_inf_norm <= settings.grad_tolerance;
  return out;
}

}  // namespace snl::detail
