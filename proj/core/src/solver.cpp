#include "snl/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <spdlog/spdlog.h>

#include "lm.hpp"
#include "snl/parallel.hpp"
#include "snl/potential.hpp"

namespace snl {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kLevenbergMarquardt: return "gauss-newton-lm";
    case Method::kGradientDescentArmijo: return "gradient-descent-armijo";
  }
  return "gauss-newton-lm";
}

Method parse_method(std::string_view name) {
  if (name == "gauss-newton-lm" || name == "lm") return Method::kLevenbergMarquardt;
  if (name == "gradient-descent-armijo" || name == "gd") return Method::kGradientDescentArmijo;
  throw InvalidArgument("unknown method '" + std::string(name) + "'");
}

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::kLocalNE: return "local-NE";
    case Classification::kSaddle: return "saddle";
    case Classification::kIndeterminate: return "indeterminate";
  }
  return "indeterminate";
}

Classification parse_classification(std::string_view name) {
  if (name == "local-NE") return Classification::kLocalNE;
  if (name == "saddle") return Classification::kSaddle;
  if (name == "indeterminate") return Classification::kIndeterminate;
  throw InvalidArgument("unknown classification '" + std::string(name) + "'");
}

bool SolveResult::any_converged() const {
  return std::any_of(per_start.begin(), per_start.end(),
                     [](const StationaryPoint &p) { return p.converged; });
}

Classification classify_eigenvalues(double min_eig, double max_eig) {
  const double band = kPsdTolerance * (1.0 + std::abs(max_eig));
  if (min_eig > band) return Classification::kLocalNE;
  if (min_eig < -band) return Classification::kSaddle;
  return Classification::kIndeterminate;
}

namespace {

std::pair<double, double> hessian_extremes(const SensorNetwork &net, const MeasurementSet &meas,
                                           const VectorXd &x) {
  const Eigen::SelfAdjointEigenSolver<MatrixXd> eig(hessian(net, meas, x),
                                                    Eigen::EigenvaluesOnly);
  const VectorXd &ev = eig.eigenvalues();
  return {ev.minCoeff(), ev.maxCoeff()};
}

}  // namespace

Classification classify_stationary(const SensorNetwork &net, const MeasurementSet &meas,
                                   const VectorXd &x) {
  const auto [lo, hi] = hessian_extremes(net, meas, x);
  return classify_eigenvalues(lo, hi);
}

Box default_omega(const SensorNetwork &net) { return net.bounding_box().scaled(2.0); }

StationaryPoint local_minimize(const SensorNetwork &net, const MeasurementSet &meas,
                               const VectorXd &x0, const SolveOptions &opts) {
  if (x0.size() != 2 * net.num_non_anchors()) throw InvalidArgument("start must have 2N entries");
  if (!x0.allFinite()) throw InvalidArgument("start must be finite");
  if (!(opts.grad_tolerance > 0 && opts.step_tolerance > 0) || opts.max_iterations < 1) {
    throw InvalidArgument("solver tolerances and iteration budget must be positive");
  }

  const detail::NodeBox box(opts.omega.value_or(default_omega(net)));
  const detail::MinimizeSettings settings{opts.max_iterations, opts.grad_tolerance,
                                          opts.step_tolerance};
  const detail::MinimizeResult r =
      opts.method == Method::kLevenbergMarquardt
          ? detail::levenberg_marquardt(net, meas, x0, box, settings)
          : detail::gradient_descent_armijo(net, meas, x0, box, settings);

  StationaryPoint p;
  p.x = r.x;
  p.value = r.value;
  p.grad_inf_norm = r.grad_inf_norm;
  p.iterations = r.iterations;
  p.converged = r.converged;
  std::tie(p.min_hess_eigenvalue, p.max_hess_eigenvalue) = hessian_extremes(net, meas, r.x);
  p.classification = r.converged ? classify_eigenvalues(p.min_hess_eigenvalue,
                                                        p.max_hess_eigenvalue)
                                 : Classification::kIndeterminate;
  return p;
}

std::vector<VectorXd> initial_points(const SensorNetwork &net, const MeasurementSet &meas,
                                     const SolveOptions &opts) {
  if (opts.starts < 1) throw InvalidArgument("at least one start is required");
  const int n = net.num_non_anchors();
  const Box bbox = net.bounding_box();
  const Box init = opts.init_box.value_or(bbox);
  const double jitter = 1e-3 * bbox.extent().norm();

  std::vector<VectorXd> starts;
  starts.reserve(opts.starts);

  Point2 all_centroid = Point2::Zero();
  for (const Point2 &a : meas.anchors_measured) all_centroid += a;
  all_centroid /= static_cast<double>(meas.anchors_measured.size());

  VectorXd first(2 * n);
  for (int i = 0; i < n; ++i) {
    Point2 c = Point2::Zero();
    int count = 0;
    for (const Edge &e : net.as_edges()) {
      if (e.first != i) continue;
      c += meas.anchors_measured[e.second];
      ++count;
    }
    c = count > 0 ? Point2(c / count) : all_centroid;
    // Spread nodes sharing an anchor set so their mutual edges are not degenerate.
    const double angle = 2.0 * std::numbers::pi * i / n + 0.5;
    set_node(first, i, c + jitter * Point2(std::cos(angle), std::sin(angle)));
  }
  starts.push_back(std::move(first));

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> ux(init.lo.x(), init.hi.x());
  std::uniform_real_distribution<double> uy(init.lo.y(), init.hi.y());
  for (int s = 1; s < opts.starts; ++s) {
    VectorXd x(2 * n);
    for (int i = 0; i < n; ++i) {
      const double px = ux(rng);
      set_node(x, i, Point2(px, uy(rng)));
    }
    starts.push_back(std::move(x));
  }
  return starts;
}

SolveResult multistart_solve(const SensorNetwork &net, const MeasurementSet &meas,
                             const SolveOptions &opts) {
  const std::vector<VectorXd> starts = initial_points(net, meas, opts);

  SolveResult out;
  out.per_start.resize(starts.size());
  parallel_for(starts.size(), opts.threads, [&](std::size_t k) {
    out.per_start[k] = local_minimize(net, meas, starts[k], opts);
    out.per_start[k].start_index = static_cast<int>(k);
  });

  // Best: lowest Phi; values within the tie tolerance go to the lower start.
  const StationaryPoint *best = &out.per_start.front();
  for (const StationaryPoint &p : out.per_start) {
    if (p.value < best->value - kTieTolerance) best = &p;
  }
  out.best = *best;

  // Cluster representatives are the lowest-value member of each cluster.
  std::vector<StationaryPoint> clusters;
  for (const StationaryPoint &p : out.per_start) {
    auto it = std::find_if(clusters.begin(), clusters.end(), [&](const StationaryPoint &c) {
      return (c.x - p.x).lpNorm<Eigen::Infinity>() < kDedupTolerance;
    });
    if (it == clusters.end()) {
      clusters.push_back(p);
    } else if (p.value < it->value - kTieTolerance) {
      *it = p;
    }
  }
  std::stable_sort(clusters.begin(), clusters.end(),
                   [](const StationaryPoint &a, const StationaryPoint &b) {
                     return a.value < b.value;
                   });
  auto best_it = std::find_if(clusters.begin(), clusters.end(), [&](const StationaryPoint &c) {
    return (c.x - out.best.x).lpNorm<Eigen::Infinity>() < kDedupTolerance;
  });
  if (best_it != clusters.end() && best_it != clusters.begin()) {
    std::rotate(clusters.begin(), best_it, best_it + 1);
  }
  out.distinct = std::move(clusters);

  const auto reached = std::count_if(out.per_start.begin(), out.per_start.end(),
                                     [&](const StationaryPoint &p) {
                                       return (p.x - out.best.x).lpNorm<Eigen::Infinity>() <
                                              kDedupTolerance;
                                     });
  out.globally_unique_evidence =
      static_cast<double>(reached) / static_cast<double>(out.per_start.size());
  out.mle = mean_localization_error(out.best.x, net.true_profile());

  spdlog::debug("multistart: {} starts, {} distinct, best phi {:.6e}, evidence {:.3f}",
                starts.size(), out.distinct.size(), out.best.value,
                out.globally_unique_evidence);
  return out;
}

double mean_localization_error(const VectorXd &x, const VectorXd &x_true) {
  if (x.size() != x_true.size() || x.size() % 2 != 0 || x.size() == 0) {
    throw InvalidArgument("profiles must have the same even, nonzero length");
  }
  const double n = static_cast<double>(x.size() / 2);
  return std::sqrt((x - x_true).squaredNorm()) / n;
}

}  // namespace snl
