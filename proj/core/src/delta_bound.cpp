#include "snl/delta_bound.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include <spdlog/spdlog.h>

#include "lm.hpp"
#include "snl/parallel.hpp"
#include "snl/potential.hpp"
#include "snl/rigidity.hpp"
#include "snl/solver.hpp"

namespace snl {
namespace {

// Per-purpose streams derived from the user seed.
constexpr std::uint64_t kStartStream = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kHessianStream = 0xbf58476d1ce4e5b9ULL;

std::string format_tolerance(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

VectorXd random_unit(std::mt19937_64 &rng, Eigen::Index dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  VectorXd v(dim);
  do {
    for (Eigen::Index k = 0; k < dim; ++k) v[k] = gauss(rng);
  } while (v.norm() == 0.0);
  return v / v.norm();
}

std::vector<VectorXd> annulus_starts(const SensorNetwork &net, double delta1, double outer,
                                     const DeltaOptions &opts) {
  const VectorXd center = net.true_profile();
  const Eigen::Index dim = center.size();
  const double r_in = std::sqrt(delta1);
  const double r_out = std::sqrt(outer);
  std::mt19937_64 rng(opts.seed ^ kStartStream);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  std::vector<VectorXd> out;
  // Signed coordinate directions first, then random ones.
  for (int k = 0; k < opts.sphere_starts; ++k) {
    VectorXd dir;
    if (k < 2 * dim) {
      dir = VectorXd::Zero(dim);
      dir[k / 2] = k % 2 == 0 ? 1.0 : -1.0;
    } else {
      dir = random_unit(rng, dim);
    }
    out.push_back(center + r_in * dir);
  }
  for (int k = 0; k < opts.annulus_starts; ++k) {
    const VectorXd dir = random_unit(rng, dim);
    out.push_back(center + (r_in + unif(rng) * (r_out - r_in)) * dir);
  }
  return out;
}

// Residuals at x are r0 + A n for the flat noise vector n.
struct NoiseModel {
  VectorXd r0;
  MatrixXd a;
};

NoiseModel linear_noise_model(const SensorNetwork &net, const MeasurementSet &noiseless,
                              const VectorXd &x) {
  const auto ns = static_cast<Eigen::Index>(net.ss_edges().size());
  const auto na = static_cast<Eigen::Index>(net.as_edges().size());
  NoiseModel m;
  m.r0 = residual_vector(Framework(net, x), noiseless);
  m.a = MatrixXd::Zero(ns + na, ns + na + 2 * net.num_anchors());
  for (Eigen::Index k = 0; k < ns; ++k) m.a(k, k) = -1.0;
  const auto &truth = net.non_anchors_true();
  for (Eigen::Index k = 0; k < na; ++k) {
    const Edge &e = net.as_edges()[k];
    m.a(ns + k, ns + k) = -1.0;
    const Point2 shift = node(x, e.first) - truth[e.first];
    m.a(ns + k, ns + na + 2 * e.second) = -2.0 * shift.x();
    m.a(ns + k, ns + na + 2 * e.second + 1) = -2.0 * shift.y();
  }
  return m;
}

// argmin |r0 + B m|^2 subject to |m|^2 <= radius2. Convex, so the boundary
// solution is (B^T B + nu I) m = -B^T r0 for the unique nu >= 0 that lands on
// the sphere.
VectorXd trust_region(const MatrixXd &b, const VectorXd &r0, double radius2) {
  if (radius2 <= 0.0) return VectorXd::Zero(b.cols());
  const Eigen::SelfAdjointEigenSolver<MatrixXd> eig(b.transpose() * b);
  const VectorXd lam = eig.eigenvalues().cwiseMax(0.0);
  const VectorXd g = eig.eigenvectors().transpose() * (b.transpose() * r0);
  const double tiny = 1e-14 * std::max(lam.maxCoeff(), 1e-300);

  VectorXd coef(g.size());
  for (Eigen::Index k = 0; k < g.size(); ++k) coef[k] = lam[k] > tiny ? -g[k] / lam[k] : 0.0;
  if (coef.squaredNorm() <= radius2) return eig.eigenvectors() * coef;

  auto shifted = [&](double nu) {
    return VectorXd((-g.array() / (lam.array() + nu)).matrix());
  };
  double lo = 0.0;
  double hi = g.norm() / std::sqrt(radius2);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (shifted(mid).squaredNorm() > radius2 ? lo : hi) = mid;
  }
  VectorXd m = shifted(hi);
  const double n2 = m.squaredNorm();
  if (n2 > radius2) m *= std::sqrt(radius2 / n2);
  return eig.eigenvectors() * m;
}

struct RunResult {
  VectorXd x;
  VectorXd noise;
  double value = 0.0;
  bool converged = false;
};

// Block-coordinate descent over x (annulus) and the weighted noise ball. With
// delta2 == 0 this is exactly the noiseless annulus minimization.
RunResult joint_descent(const SensorNetwork &net, const detail::Annulus &annulus,
                        const VectorXd &x0, VectorXd noise, double delta2,
                        const VectorXd &weights, const DeltaOptions &opts) {
  const MeasurementSet noiseless = measure(net, NoiseDraw::zero(net));
  const detail::MinimizeSettings settings{opts.max_iterations, opts.grad_tolerance, 1e-14};
  const VectorXd inv_sqrt_w = weights.cwiseSqrt().cwiseInverse();

  RunResult r;
  r.x = x0;
  r.noise = std::move(noise);
  double previous = std::numeric_limits<double>::infinity();
  for (int it = 0; it < std::max(1, opts.bcd_iterations); ++it) {
    const MeasurementSet meas = measure(net, NoiseDraw::from_flat(net, r.noise));
    const detail::MinimizeResult step =
        detail::levenberg_marquardt(net, meas, r.x, annulus, settings);
    r.x = step.x;
    r.converged = step.converged;
    r.value = step.value;

    if (delta2 > 0.0) {
      const NoiseModel model = linear_noise_model(net, noiseless, r.x);
      const MatrixXd b = model.a * inv_sqrt_w.asDiagonal();
      const VectorXd m = trust_region(b, model.r0, delta2);
      const VectorXd candidate = inv_sqrt_w.cwiseProduct(m);
      const double value =
          potential(net, measure(net, NoiseDraw::from_flat(net, candidate)), r.x);
      if (value < r.value) {
        r.noise = candidate;
        r.value = value;
      }
    }
    if (previous - r.value <= 1e-12 * (1.0 + r.value)) break;
    previous = r.value;
  }
  return r;
}

PhiEstimate run_starts(const SensorNetwork &net, double delta1, double delta2, double outer,
                       const NoiseWeights &w, const DeltaOptions &opts,
                       const std::vector<PhiEstimate> &warm) {
  if (!(delta1 > 0.0)) throw InvalidArgument("delta1 must be positive");
  if (!(outer > delta1)) throw InvalidArgument("outer radius must exceed delta1");
  if (!(delta2 >= 0.0 && delta2 <= delta1)) {
    throw InvalidArgument("delta2 must lie in [0, delta1]");
  }
  const detail::Annulus annulus(net.true_profile(), delta1, outer);
  const VectorXd weights = flat_weights(net, w);
  const Eigen::Index noise_dim = weights.size();

  std::vector<std::pair<VectorXd, VectorXd>> starts;
  for (VectorXd &x : annulus_starts(net, delta1, outer, opts)) {
    starts.emplace_back(std::move(x), VectorXd::Zero(noise_dim));
  }
  for (const PhiEstimate &p : warm) {
    VectorXd n = p.noise.matches(net) ? p.noise.flat() : VectorXd::Zero(noise_dim);
    const double budget = n.cwiseProduct(n).dot(weights);
    if (budget > delta2) n *= delta2 > 0.0 ? std::sqrt(delta2 / budget) : 0.0;
    starts.emplace_back(p.x, std::move(n));
  }
  if (starts.empty()) throw InvalidArgument("no starts requested");

  std::vector<RunResult> runs(starts.size());
  parallel_for(starts.size(), opts.threads, [&](std::size_t k) {
    runs[k] = joint_descent(net, annulus, starts[k].first, starts[k].second, delta2, weights,
                            opts);
  });

  std::size_t best = 0;
  for (std::size_t k = 1; k < runs.size(); ++k) {
    if (runs[k].value < runs[best].value) best = k;
  }
  PhiEstimate out;
  out.value = runs[best].value;
  out.x = runs[best].x;
  out.noise = NoiseDraw::from_flat(net, runs[best].noise);
  out.starts = static_cast<int>(runs.size());
  out.converged = static_cast<int>(
      std::count_if(runs.begin(), runs.end(), [](const RunResult &r) { return r.converged; }));
  if (is_generically_globally_rigid(net) != Verdict::kYes) {
    out.warning = "scenario is not generically globally rigid; the minimum may be zero";
  }
  return out;
}

}  // namespace

NoiseWeights noise_weights(const SensorNetwork &net) {
  if (net.as_edges().empty()) throw InvalidArgument("scenario has no anchor edges");
  const double dmax = net.max_anchor_edge_length();
  return {1.0, 2.0, 32.0 * dmax * dmax};
}

double default_outer_radius(const SensorNetwork &net) {
  return 4.0 * net.bounding_box().extent().squaredNorm();
}

PhiEstimate phi1(const SensorNetwork &net, double delta1, double outer_radius,
                 const DeltaOptions &opts) {
  return run_starts(net, delta1, 0.0, outer_radius, noise_weights(net), opts, {});
}

PhiEstimate phi2(const SensorNetwork &net, double delta1, double delta2, double outer_radius,
                 const NoiseWeights &weights, const DeltaOptions &opts,
                 const std::vector<PhiEstimate> &warm_starts) {
  return run_starts(net, delta1, delta2, outer_radius, weights, opts, warm_starts);
}

std::vector<PhiEstimate> phi2_profile(const SensorNetwork &net, double delta1,
                                      const std::vector<double> &delta2_grid,
                                      double outer_radius, const NoiseWeights &weights,
                                      const DeltaOptions &opts) {
  if (!std::is_sorted(delta2_grid.begin(), delta2_grid.end())) {
    throw InvalidArgument("delta2 grid must be increasing");
  }
  std::vector<PhiEstimate> out;
  for (double d2 : delta2_grid) {
    std::vector<PhiEstimate> warm;
    if (!out.empty()) warm.push_back(out.back());
    out.push_back(phi2(net, delta1, d2, outer_radius, weights, opts, warm));
  }
  return out;
}

DeltaReport delta_bound(const SensorNetwork &net, double delta1_init, const DeltaOptions &opts) {
  if (!(delta1_init > 0.0) || !std::isfinite(delta1_init)) {
    throw InvalidArgument("delta1 must be positive and finite");
  }
  DeltaReport rep;
  rep.weights = noise_weights(net);
  rep.weight_convention = kWeightConvention;
  rep.outer_radius = opts.outer_radius.value_or(default_outer_radius(net));

  // Step 1: the solution near x* must be a strict local minimum for every
  // sampled draw inside the budget.
  const VectorXd truth = net.true_profile();
  SolveOptions local;
  local.max_iterations = opts.max_iterations;
  local.grad_tolerance = opts.grad_tolerance;
  double delta1 = delta1_init;
  for (;;) {
    if (delta1 < opts.min_delta1) {
      throw RigidityError("Hessian is not positive definite at the solution for any noise "
                          "budget down to " +
                          format_tolerance(opts.min_delta1) +
                          "; the scenario is not numerically globally rigid");
    }
    if (!(rep.outer_radius > delta1)) throw InvalidArgument("outer radius must exceed delta1");
    const int samples = std::max(1, opts.hessian_samples);
    std::vector<char> ok(samples, 0);
    parallel_for(samples, opts.threads, [&](std::size_t s) {
      const std::uint64_t seed = (opts.seed ^ kHessianStream) + 0x632be59bd9b4e019ULL * s;
      const NoiseDraw draw =
          s % 2 == 0 ? draw_noise_on_boundary(net, rep.weights, delta1 * (1.0 - 1e-6), seed)
                     : draw_noise(net, {delta1, rep.weights, NoiseDistribution::kUniformBall, seed});
      const StationaryPoint p = local_minimize(net, measure(net, draw), truth, local);
      ok[s] = p.classification == Classification::kLocalNE;
    });
    const int passed = static_cast<int>(std::count(ok.begin(), ok.end(), 1));
    rep.trace.push_back({"hessian", delta1, 0.0, 0.0, samples, passed});
    if (passed == samples) break;
    spdlog::info("delta1 {:.6g}: {} of {} Hessian checks failed, halving", delta1,
                 samples - passed, samples);
    delta1 *= 0.5;
    ++rep.halvings;
  }
  rep.delta1 = delta1;
  rep.hessian_pd_verified = true;

  const PhiEstimate p1 = phi1(net, delta1, rep.outer_radius, opts);
  if (!p1.warning.empty()) spdlog::warn("{}", p1.warning);
  rep.phi1 = p1.value;
  rep.trace.push_back({"phi1", delta1, 0.0, p1.value, p1.starts, p1.converged});
  const double half = 0.5 * rep.phi1;

  // Step 2: largest delta2 whose joint minimum stays at or above phi1 / 2.
  PhiEstimate at_hi = phi2(net, delta1, delta1, rep.outer_radius, rep.weights, opts, {p1});
  rep.trace.push_back({"phi2", delta1, delta1, at_hi.value, at_hi.starts, at_hi.converged});
  if (at_hi.value >= half) {
    rep.delta2 = delta1;
    rep.phi2 = at_hi.value;
  } else {
    double lo = 0.0;
    double hi = delta1;
    PhiEstimate at_lo = p1;
    for (int it = 0; it < 200 && hi - lo > opts.bisection_tolerance * hi && hi > opts.min_delta1;
         ++it) {
      const double mid = 0.5 * (lo + hi);
      PhiEstimate est = phi2(net, delta1, mid, rep.outer_radius, rep.weights, opts, {at_lo, at_hi});
      rep.trace.push_back({"phi2", delta1, mid, est.value, est.starts, est.converged});
      if (est.value >= half) {
        lo = mid;
        at_lo = std::move(est);
      } else {
        hi = mid;
        at_hi = std::move(est);
      }
    }
    rep.delta2 = lo;
    rep.phi2 = at_lo.value;
  }

  // Step 3.
  rep.delta = std::min(rep.delta2, half);
  return rep;
}

bool noise_budget_check(const NoiseDraw &draw, const NoiseWeights &weights, double delta) {
  return weighted_norm(draw, weights) < delta;
}

}  // namespace snl
