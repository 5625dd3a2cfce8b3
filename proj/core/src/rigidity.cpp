#include "snl/rigidity.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

namespace snl {
namespace {

constexpr double kMarginalRatio = 1e-8;

void fill_row(MatrixXd &m, Eigen::Index row, int j, const Point2 &xj, int k,
              const Point2 &xk) {
  const Point2 d = xj - xk;
  m(row, 2 * j) = d.x();
  m(row, 2 * j + 1) = d.y();
  m(row, 2 * k) = -d.x();
  m(row, 2 * k + 1) = -d.y();
}

bool connected_without(const Graph &g, int skip_a, int skip_b) {
  std::vector<std::vector<int>> adj(g.num_vertices);
  for (const Edge &e : g.edges) {
    adj[e.first].push_back(e.second);
    adj[e.second].push_back(e.first);
  }
  int start = -1;
  int alive = 0;
  for (int v = 0; v < g.num_vertices; ++v) {
    if (v == skip_a || v == skip_b) continue;
    ++alive;
    if (start < 0) start = v;
  }
  if (alive <= 1) return true;
  std::vector<bool> seen(g.num_vertices, false);
  std::vector<int> stack{start};
  seen[start] = true;
  int reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : adj[v]) {
      if (w == skip_a || w == skip_b || seen[w]) continue;
      seen[w] = true;
      ++reached;
      stack.push_back(w);
    }
  }
  return reached == alive;
}

bool is_complete(const Graph &g) {
  const long n = g.num_vertices;
  std::vector<std::vector<bool>> has(n, std::vector<bool>(n, false));
  for (const Edge &e : g.edges) {
    if (e.first != e.second) has[e.first][e.second] = has[e.second][e.first] = true;
  }
  for (long i = 0; i < n; ++i)
    for (long j = i + 1; j < n; ++j)
      if (!has[i][j]) return false;
  return true;
}

}  // namespace

Framework::Framework(const SensorNetwork &net, VectorXd x)
    : network(&net), positions(std::move(x)) {
  if (positions.size() != 2 * net.num_non_anchors()) {
    throw InvalidArgument("framework profile must have 2N entries");
  }
}

MatrixXd RigidityMatrixSet::upper_right() const {
  return full.topRightCorner(reduced.rows(), full.cols() - num_non_anchor_cols);
}
MatrixXd RigidityMatrixSet::lower_left() const {
  return full.bottomLeftCorner(full.rows() - reduced.rows(), num_non_anchor_cols);
}
MatrixXd RigidityMatrixSet::lower_right() const {
  return full.bottomRightCorner(full.rows() - reduced.rows(),
                                full.cols() - num_non_anchor_cols);
}

RigidityMatrixSet rigidity_matrices(const Framework &fw, const MeasurementSet &meas) {
  const SensorNetwork &net = *fw.network;
  if (!meas.matches(net)) throw InvalidArgument("measurements are not keyed to this network");
  const int n = net.num_non_anchors();
  const int m = net.num_anchors();
  const auto nss = static_cast<Eigen::Index>(net.ss_edges().size());
  const auto nas = static_cast<Eigen::Index>(net.as_edges().size());
  const auto naa = static_cast<Eigen::Index>(net.aa_edges().size());

  RigidityMatrixSet out;
  out.num_non_anchor_cols = 2 * n;
  out.full = MatrixXd::Zero(nss + nas + naa, 2 * (n + m));
  out.revised_reduced = MatrixXd::Zero(nss + nas, 2 * n);

  Eigen::Index row = 0;
  for (const Edge &e : net.ss_edges()) {
    const Point2 xi = node(fw.positions, e.first);
    const Point2 xj = node(fw.positions, e.second);
    fill_row(out.full, row, e.first, xi, e.second, xj);
    const Point2 d = xi - xj;
    out.revised_reduced.block<1, 2>(row, 2 * e.first) = d.transpose();
    out.revised_reduced.block<1, 2>(row, 2 * e.second) = -d.transpose();
    ++row;
  }
  for (const Edge &e : net.as_edges()) {
    const Point2 xi = node(fw.positions, e.first);
    fill_row(out.full, row, e.first, xi, n + e.second, net.anchors_true()[e.second]);
    const Point2 d = xi - meas.anchors_measured[e.second];
    out.revised_reduced.block<1, 2>(row, 2 * e.first) = d.transpose();
    ++row;
  }
  for (const Edge &e : net.aa_edges()) {
    fill_row(out.full, row, n + e.first, net.anchors_true()[e.first], n + e.second,
             net.anchors_true()[e.second]);
    ++row;
  }
  out.reduced = out.full.topLeftCorner(nss + nas, 2 * n);
  return out;
}

VectorXd residual_vector(const Framework &fw, const MeasurementSet &meas) {
  const SensorNetwork &net = *fw.network;
  if (!meas.matches(net)) throw InvalidArgument("measurements are not keyed to this network");
  const auto nss = net.ss_edges().size();
  VectorXd rho(static_cast<Eigen::Index>(nss + net.as_edges().size()));
  for (std::size_t k = 0; k < nss; ++k) {
    const Edge &e = net.ss_edges()[k];
    rho[k] = (node(fw.positions, e.first) - node(fw.positions, e.second)).squaredNorm() -
             meas.d2_ss[k];
  }
  for (std::size_t k = 0; k < net.as_edges().size(); ++k) {
    const Edge &e = net.as_edges()[k];
    rho[nss + k] =
        (node(fw.positions, e.first) - meas.anchors_measured[e.second]).squaredNorm() -
        meas.d2_as[k];
  }
  return rho;
}

MatrixXd lambda_matrix(const VectorXd &residuals, const SensorNetwork &net) {
  const auto nss = net.ss_edges().size();
  if (residuals.size() != static_cast<Eigen::Index>(nss + net.as_edges().size())) {
    throw InvalidArgument("residual vector does not match the network edge sets");
  }
  const int n = net.num_non_anchors();
  MatrixXd lambda = MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < nss; ++k) {
    const Edge &e = net.ss_edges()[k];
    lambda(e.first, e.second) = residuals[k];
    lambda(e.second, e.first) = residuals[k];
    lambda(e.first, e.first) -= residuals[k];
    lambda(e.second, e.second) -= residuals[k];
  }
  for (std::size_t k = 0; k < net.as_edges().size(); ++k) {
    lambda(net.as_edges()[k].first, net.as_edges()[k].first) -= residuals[nss + k];
  }
  return lambda;
}

Graph Graph::of(const SensorNetwork &net) { return {net.num_vertices(), net.vertex_edges()}; }

Graph Graph::complete(int n) {
  Graph g{n, {}};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.edges.push_back({i, j});
  return g;
}

Graph Graph::cycle(int n) {
  Graph g{n, {}};
  for (int i = 0; i < n; ++i) g.edges.push_back({std::min(i, (i + 1) % n), std::max(i, (i + 1) % n)});
  return g;
}

MatrixXd rigidity_matrix(const Graph &g, const std::vector<Point2> &realization) {
  if (static_cast<int>(realization.size()) != g.num_vertices) {
    throw InvalidArgument("realization size does not match the graph");
  }
  MatrixXd r = MatrixXd::Zero(static_cast<Eigen::Index>(g.edges.size()), 2 * g.num_vertices);
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const Edge &e = g.edges[k];
    fill_row(r, static_cast<Eigen::Index>(k), e.first, realization[e.first], e.second,
             realization[e.second]);
  }
  return r;
}

NumericalRank numerical_rank(const MatrixXd &m) {
  if (m.size() == 0) return {};
  const Eigen::JacobiSVD<MatrixXd> svd(m);
  const VectorXd &sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv[0] : 0.0;
  if (smax == 0.0) return {};
  const double tol = static_cast<double>(std::max(m.rows(), m.cols())) *
                     std::numeric_limits<double>::epsilon() * smax;
  NumericalRank out;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv[k] > tol) ++out.rank;
    if (sv[k] > tol && sv[k] < kMarginalRatio * smax) out.marginal = true;
  }
  return out;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kYes: return "yes";
    case Verdict::kNo: return "no";
    case Verdict::kIndeterminate: return "indeterminate";
  }
  return "indeterminate";
}

Verdict generic_rigidity(const Graph &g, int trials, std::uint64_t seed) {
  const int v = g.num_vertices;
  if (v <= 1) return Verdict::kYes;
  const int target = 2 * v - 3;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int yes = 0, no = 0;
  for (int t = 0; t < trials; ++t) {
    std::vector<Point2> pts(v);
    for (auto &p : pts) {
      const double x = unif(rng);
      p = Point2(x, unif(rng));
    }
    const NumericalRank nr = numerical_rank(rigidity_matrix(g, pts));
    if (nr.marginal) continue;
    (nr.rank == target ? yes : no) += 1;
  }
  if (yes + no == 0 || yes == no) return Verdict::kIndeterminate;
  return yes > no ? Verdict::kYes : Verdict::kNo;
}

bool is_generically_rigid(const Graph &g) { return generic_rigidity(g) == Verdict::kYes; }
bool is_generically_rigid(const SensorNetwork &net) { return is_generically_rigid(Graph::of(net)); }

Verdict redundant_rigidity(const Graph &g) {
  bool indeterminate = false;
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    Graph reduced{g.num_vertices, {}};
    reduced.edges.reserve(g.edges.size() - 1);
    for (std::size_t j = 0; j < g.edges.size(); ++j)
      if (j != k) reduced.edges.push_back(g.edges[j]);
    const Verdict v = generic_rigidity(reduced);
    if (v == Verdict::kNo) return Verdict::kNo;
    if (v == Verdict::kIndeterminate) indeterminate = true;
  }
  if (indeterminate) return Verdict::kIndeterminate;
  return generic_rigidity(g);
}

bool is_three_connected(const Graph &g) {
  if (g.num_vertices < 4) return false;
  for (int a = 0; a < g.num_vertices; ++a)
    for (int b = a; b < g.num_vertices; ++b)
      if (!connected_without(g, a, b)) return false;
  return true;
}

Verdict generic_global_rigidity(const Graph &g) {
  if (g.num_vertices <= 3) return is_complete(g) ? Verdict::kYes : Verdict::kNo;
  if (!is_three_connected(g)) return Verdict::kNo;
  return redundant_rigidity(g);
}

Verdict is_generically_globally_rigid(const SensorNetwork &net) {
  return generic_global_rigidity(Graph::of(net));
}

}  // namespace snl
