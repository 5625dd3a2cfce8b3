#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "snl/delta_bound.hpp"
#include "snl/io.hpp"
#include "snl/potential.hpp"
#include "snl/rigidity.hpp"

namespace snl::cli {
namespace {

std::string describe(double value, double limit) {
  std::ostringstream os;
  os.precision(3);
  os << value << " (limit " << limit << ")";
  return os.str();
}

VectorXd random_profile(const SensorNetwork &net, std::mt19937_64 &rng) {
  const Box box = net.bounding_box();
  std::uniform_real_distribution<double> ux(box.lo.x(), box.hi.x());
  std::uniform_real_distribution<double> uy(box.lo.y(), box.hi.y());
  VectorXd x(2 * net.num_non_anchors());
  for (int i = 0; i < net.num_non_anchors(); ++i) {
    const double px = ux(rng);
    set_node(x, i, {px, uy(rng)});
  }
  return x;
}

bool same_edges(const std::vector<Edge> &a, const std::vector<Edge> &b) { return a == b; }

}  // namespace

std::vector<Check> verify_scenario(const SensorNetwork &net, std::uint64_t seed, int threads) {
  std::vector<Check> checks;
  std::mt19937_64 rng(seed);
  const double scale = net.bounding_box().extent().norm();
  const NoiseWeights weights = noise_weights(net);
  const NoiseDraw draw = draw_noise(net, {0.01 * scale * scale, weights,
                                          NoiseDistribution::kUniformBall, seed});
  const MeasurementSet meas = measure(net, draw);

  {
    const Scenario back = scenario_from_json(to_json(Scenario{net, std::nullopt}));
    const bool ok = same_edges(back.network.ss_edges(), net.ss_edges()) &&
                    same_edges(back.network.as_edges(), net.as_edges()) &&
                    back.network.true_profile() == net.true_profile();
    checks.push_back({"json-round-trip", ok, ok ? "identical" : "scenario changed on reload"});
  }

  {
    bool ok = true;
    const double r = net.sensing_range();
    const auto edges = net.vertex_edges();
    for (int u = 0; u < net.num_vertices(); ++u) {
      for (int v = u + 1; v < net.num_vertices(); ++v) {
        const bool present = std::find(edges.begin(), edges.end(), Edge{u, v}) != edges.end();
        // Anchor pairs are always joined.
        const bool expected = (u >= net.num_non_anchors() && v >= net.num_non_anchors()) ||
                              (net.vertex(u) - net.vertex(v)).norm() <= r;
        ok = ok && present == expected;
      }
    }
    checks.push_back({"edge-sets", ok, ok ? "match the sensing range" : "edge set mismatch"});
  }

  {
    const Verdict v = is_generically_globally_rigid(net);
    checks.push_back({"global-rigidity", v == Verdict::kYes, std::string(to_string(v))});
  }

  {
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
      const VectorXd x = random_profile(net, rng);
      std::uniform_int_distribution<int> player(0, net.num_non_anchors() - 1);
      std::normal_distribution<double> g(0.0, scale);
      const int i = player(rng);
      const double dx = g(rng);
      const Point2 dev(dx, g(rng));
      const double gap = check_potential_identity(net, meas, x, i, dev);
      worst = std::max(worst, gap / (1.0 + std::abs(potential(net, meas, x))));
    }
    checks.push_back({"potential-identity", worst <= 1e-12, describe(worst, 1e-12)});
  }

  {
    double grad_err = 0.0;
    double hess_err = 0.0;
    for (int t = 0; t < 20; ++t) {
      const VectorXd x = random_profile(net, rng);
      const Derivatives d = evaluate(net, meas, x);
      VectorXd fd_grad(x.size());
      MatrixXd fd_hess(x.size(), x.size());
      for (Eigen::Index k = 0; k < x.size(); ++k) {
        const double h = 1e-5 * (1.0 + std::abs(x[k]));
        VectorXd xp = x, xm = x;
        xp[k] += h;
        xm[k] -= h;
        fd_grad[k] = (potential(net, meas, xp) - potential(net, meas, xm)) / (2 * h);
        fd_hess.col(k) = (gradient(net, meas, xp) - gradient(net, meas, xm)) / (2 * h);
      }
      grad_err = std::max(grad_err, (fd_grad - d.gradient).norm() / (1.0 + d.gradient.norm()));
      hess_err = std::max(hess_err, (fd_hess - d.hessian).norm() / (1.0 + d.hessian.norm()));
    }
    checks.push_back({"gradient-fd", grad_err <= 1e-6, describe(grad_err, 1e-6)});
    checks.push_back({"hessian-fd", hess_err <= 1e-5, describe(hess_err, 1e-5)});
  }

  {
    double worst = 0.0;
    for (std::size_t k = 0; k < net.as_edges().size(); ++k) {
      const Edge &e = net.as_edges()[k];
      const double lhs = meas.d2_as[k] - draw.e[k];
      const double rhs =
          (net.non_anchors_true()[e.first] - meas.anchors_measured[e.second]).squaredNorm();
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
    checks.push_back({"measurement-identity", worst <= 1e-12, describe(worst, 1e-12)});
  }

  {
    const MeasurementSet exact = measure(net, NoiseDraw::zero(net));
    const VectorXd truth = net.true_profile();
    const Eigen::SelfAdjointEigenSolver<MatrixXd> eig(hessian(net, exact, truth));
    const double lo = eig.eigenvalues().minCoeff();
    checks.push_back({"hessian-pd-at-truth",
                      classify_eigenvalues(lo, eig.eigenvalues().maxCoeff()) ==
                          Classification::kLocalNE,
                      describe(lo, 0.0)});

    SolveOptions opts;
    opts.seed = seed;
    opts.threads = threads;
    const SolveResult res = multistart_solve(net, exact, opts);
    const double err = (res.best.x - truth).lpNorm<Eigen::Infinity>();
    checks.push_back({"zero-noise-recovery", err <= 1e-6 && res.best.value <= 1e-12,
                      describe(err, 1e-6)});
  }
  return checks;
}

}  // namespace snl::cli
