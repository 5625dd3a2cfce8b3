#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "snl/types.hpp"

namespace snl {

// Axis-aligned rectangle [lo, hi].
struct Box {
  Point2 lo = Point2::Zero();
  Point2 hi = Point2::Ones();

  [[nodiscard]] Point2 center() const { return 0.5 * (lo + hi); }
  [[nodiscard]] Point2 extent() const { return hi - lo; }
  [[nodiscard]] bool contains(const Point2 &p) const {
    return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all();
  }
  // Same center, every half-width multiplied by `factor`.
  [[nodiscard]] Box scaled(double factor) const;
};

/// True sensor network: positions of non-anchors and anchors, the sensing
/// range and the edge sets derived from them.
///
/// Vertex ordering: non-anchors take vertex ids 0..N-1 and anchors N..N+M-1.
/// Edge ordering: ss edges, then as edges, then aa edges, each class sorted
/// lexicographically by index pair. Instances are immutable.
class SensorNetwork {
 public:
  /// Validates the positions and derives all edge sets.
  ///
  /// Throws InvalidArgument when a coordinate is not finite, the range is not
  /// positive, fewer than three anchors are given, or two nodes coincide.
  static SensorNetwork build(std::vector<Point2> non_anchors,
                             std::vector<Point2> anchors,
                             double sensing_range);

  [[nodiscard]] int num_non_anchors() const {
    return static_cast<int>(non_anchors_.size());
  }
  [[nodiscard]] int num_anchors() const {
    return static_cast<int>(anchors_.size());
  }
  [[nodiscard]] int num_vertices() const {
    return num_non_anchors() + num_anchors();
  }
  [[nodiscard]] double sensing_range() const { return range_; }

  [[nodiscard]] const std::vector<Point2> &non_anchors_true() const {
    return non_anchors_;
  }
  [[nodiscard]] const std::vector<Point2> &anchors_true() const {
    return anchors_;
  }
  [[nodiscard]] const std::vector<Edge> &ss_edges() const { return ss_; }
  [[nodiscard]] const std::vector<Edge> &as_edges() const { return as_; }
  [[nodiscard]] const std::vector<Edge> &aa_edges() const { return aa_; }
  [[nodiscard]] int num_edges() const {
    return static_cast<int>(ss_.size() + as_.size() + aa_.size());
  }

  // Position of a vertex id (non-anchors first, then anchors).
  [[nodiscard]] const Point2 &vertex(int v) const;

  /// True profile col{x_1*, ..., x_N*} as a flat 2N vector.
  [[nodiscard]] VectorXd true_profile() const;

  /// Edge list over vertex ids in the canonical order (ss, as, aa).
  [[nodiscard]] std::vector<Edge> vertex_edges() const;

  /// Largest true anchor/non-anchor distance over the as edges; 0 if none.
  [[nodiscard]] double max_anchor_edge_length() const;

  /// Bounding box of every true position.
  [[nodiscard]] Box bounding_box() const;

 private:
  SensorNetwork() = default;

  std::vector<Point2> non_anchors_;
  std::vector<Point2> anchors_;
  double range_ = 0.0;
  std::vector<Edge> ss_;
  std::vector<Edge> as_;
  std::vector<Edge> aa_;
};

/// Uniform random scenario inside `box`. Positions are resampled until no
/// two nodes coincide and no three are collinear (sine of the spanned angle
/// below 1e-9).
SensorNetwork generate_network(int num_non_anchors, int num_anchors,
                               double sensing_range, const Box &box,
                               std::uint64_t seed);

/// Flat profile view helpers: node `i` occupies entries 2i and 2i+1.
inline Point2 node(const VectorXd &profile, int i) {
  return {profile[2 * i], profile[2 * i + 1]};
}
inline void set_node(VectorXd &profile, int i, const Point2 &p) {
  profile[2 * i] = p.x();
  profile[2 * i + 1] = p.y();
}
VectorXd flatten(std::span<const Point2> points);

}  // namespace snl
