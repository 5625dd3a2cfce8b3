#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "snl/network.hpp"
#include "snl/noise.hpp"

namespace snl {

/// Current estimate of the non-anchor positions on top of a network.
/// `positions` is col{x_1, ..., x_N}.
struct Framework {
  const SensorNetwork *network = nullptr;
  VectorXd positions;

  Framework(const SensorNetwork &net, VectorXd x);
};

/// The rigidity matrix family of a framework.
///
/// `full` has one row per edge (ss, as, aa order) and 2(N+M) columns; a row
/// for edge (j, k) holds x_j - x_k in the columns of j and x_k - x_j in the
/// columns of k. Anchor columns use the true anchor positions. `reduced` keeps
/// the ss/as rows and the non-anchor columns. `revised_reduced` equals
/// `reduced` except that anchor-edge rows use x_i - (x_l + eps_l), i.e. the
/// measured anchor position.
struct RigidityMatrixSet {
  MatrixXd full;
  MatrixXd reduced;
  MatrixXd revised_reduced;
  int num_non_anchor_cols = 0;  // 2N

  // Upper-right block A and lower-right block B of
  //   full = [[reduced, A], [0, B]].
  [[nodiscard]] MatrixXd upper_right() const;
  [[nodiscard]] MatrixXd lower_left() const;
  [[nodiscard]] MatrixXd lower_right() const;
};

RigidityMatrixSet rigidity_matrices(const Framework &fw, const MeasurementSet &meas);

/// rho_e = |x_i - x_j|^2 - d_ij^2 for ss edges and
/// rho_e = |x_i - x_l|^2 - d_il^2 (measured anchor x_l) for as edges, in the
/// row order of `revised_reduced`.
VectorXd residual_vector(const Framework &fw, const MeasurementSet &meas);

/// N x N matrix with rho_ij off the diagonal (0 without an ss edge) and minus
/// the sum of every residual incident to node i (ss and as) on the diagonal.
MatrixXd lambda_matrix(const VectorXd &residuals, const SensorNetwork &net);

// --- Combinatorial / generic rigidity --------------------------------------

struct Graph {
  int num_vertices = 0;
  std::vector<Edge> edges;  // vertex-id pairs

  static Graph of(const SensorNetwork &net);
  static Graph complete(int n);
  static Graph cycle(int n);
};

/// Rigidity matrix of an arbitrary graph realization (2 columns per vertex).
MatrixXd rigidity_matrix(const Graph &g, const std::vector<Point2> &realization);

struct NumericalRank {
  int rank = 0;
  // Some singular value falls between the rank threshold and 1e-8 * sigma_max.
  bool marginal = false;
};

/// Rank from singular values with threshold max(rows, cols) * eps * sigma_max.
NumericalRank numerical_rank(const MatrixXd &m);

enum class Verdict { kYes, kNo, kIndeterminate };
std::string_view to_string(Verdict v);

/// Generic 2-D rigidity: rank of the rigidity matrix at random realizations
/// equals 2V - 3 (majority over `trials` realizations).
Verdict generic_rigidity(const Graph &g, int trials = 5, std::uint64_t seed = 0x5eed);

bool is_generically_rigid(const Graph &g);
bool is_generically_rigid(const SensorNetwork &net);

/// Rigid after removing any single edge.
Verdict redundant_rigidity(const Graph &g);

/// Still connected after removing any two vertices (requires V >= 4).
bool is_three_connected(const Graph &g);

/// 2-D generic global rigidity: complete graphs on <= 3 vertices, otherwise
/// 3-connected and redundantly rigid.
Verdict generic_global_rigidity(const Graph &g);
Verdict is_generically_globally_rigid(const SensorNetwork &net);

}  // namespace snl
