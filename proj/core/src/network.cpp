#include "snl/network.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace snl {
namespace {

constexpr double kCoincidentTol = 1e-12;
constexpr double kCollinearSinTol = 1e-9;

bool finite(const Point2 &p) { return std::isfinite(p.x()) && std::isfinite(p.y()); }

bool in_general_position(const std::vector<Point2> &pts) {
  const auto n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Point2 u = pts[j] - pts[i];
      if (u.norm() <= kCoincidentTol) return false;
      for (std::size_t k = j + 1; k < n; ++k) {
        const Point2 v = pts[k] - pts[i];
        const double cross = u.x() * v.y() - u.y() * v.x();
        if (std::abs(cross) < kCollinearSinTol * u.norm() * v.norm()) return false;
      }
    }
  }
  return true;
}

}  // namespace

Box Box::scaled(double factor) const {
  const Point2 c = center();
  const Point2 half = 0.5 * factor * extent();
  return {c - half, c + half};
}

SensorNetwork SensorNetwork::build(std::vector<Point2> non_anchors,
                                   std::vector<Point2> anchors,
                                   double sensing_range) {
  if (!(sensing_range > 0.0) || !std::isfinite(sensing_range)) {
    throw InvalidArgument("sensing range must be positive and finite");
  }
  if (anchors.size() < 3) {
    throw InvalidArgument("at least three anchors are required, got " +
                          std::to_string(anchors.size()));
  }
  if (non_anchors.empty()) {
    throw InvalidArgument("at least one non-anchor is required");
  }

  SensorNetwork net;
  net.non_anchors_ = std::move(non_anchors);
  net.anchors_ = std::move(anchors);
  net.range_ = sensing_range;

  const int n = net.num_non_anchors();
  const int m = net.num_anchors();
  for (int v = 0; v < n + m; ++v) {
    if (!finite(net.vertex(v))) {
      throw InvalidArgument("non-finite coordinate at vertex " + std::to_string(v));
    }
    for (int w = 0; w < v; ++w) {
      if ((net.vertex(v) - net.vertex(w)).norm() <= kCoincidentTol) {
        throw InvalidArgument("vertices " + std::to_string(w) + " and " +
                              std::to_string(v) + " coincide");
      }
    }
  }

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if ((net.non_anchors_[i] - net.non_anchors_[j]).norm() <= sensing_range) {
        net.ss_.push_back({i, j});
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int l = 0; l < m; ++l) {
      if ((net.non_anchors_[i] - net.anchors_[l]).norm() <= sensing_range) {
        net.as_.push_back({i, l});
      }
    }
  }
  for (int l = 0; l < m; ++l) {
    for (int k = l + 1; k < m; ++k) net.aa_.push_back({l, k});
  }
  return net;
}

const Point2 &SensorNetwork::vertex(int v) const {
  const int n = num_non_anchors();
  return v < n ? non_anchors_.at(v) : anchors_.at(v - n);
}

VectorXd SensorNetwork::true_profile() const { return flatten(non_anchors_); }

std::vector<Edge> SensorNetwork::vertex_edges() const {
  const int n = num_non_anchors();
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (const Edge &e : ss_) out.push_back(e);
  for (const Edge &e : as_) out.push_back({e.first, n + e.second});
  for (const Edge &e : aa_) out.push_back({n + e.first, n + e.second});
  return out;
}

double SensorNetwork::max_anchor_edge_length() const {
  double best = 0.0;
  for (const Edge &e : as_) {
    best = std::max(best, (non_anchors_[e.first] - anchors_[e.second]).norm());
  }
  return best;
}

Box SensorNetwork::bounding_box() const {
  Box box{vertex(0), vertex(0)};
  for (int v = 1; v < num_vertices(); ++v) {
    box.lo = box.lo.cwiseMin(vertex(v));
    box.hi = box.hi.cwiseMax(vertex(v));
  }
  return box;
}

SensorNetwork generate_network(int num_non_anchors, int num_anchors,
                               double sensing_range, const Box &box,
                               std::uint64_t seed) {
  if (num_non_anchors < 1) throw InvalidArgument("need at least one non-anchor");
  if (num_anchors < 3) throw InvalidArgument("need at least three anchors");
  if (!((box.hi.array() > box.lo.array()).all())) {
    throw InvalidArgument("generation box must have positive extent");
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(box.lo.x(), box.hi.x());
  std::uniform_real_distribution<double> uy(box.lo.y(), box.hi.y());
  const int total = num_non_anchors + num_anchors;

  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<Point2> pts(total);
    for (auto &p : pts) {
      const double x = ux(rng);
      p = Point2(x, uy(rng));
    }
    if (!in_general_position(pts)) continue;
    std::vector<Point2> non_anchors(pts.begin(), pts.begin() + num_non_anchors);
    std::vector<Point2> anchors(pts.begin() + num_non_anchors, pts.end());
    return SensorNetwork::build(std::move(non_anchors), std::move(anchors),
                                sensing_range);
  }
  throw InvalidArgument("could not place nodes in general position");
}

VectorXd flatten(std::span<const Point2> points) {
  VectorXd out(2 * static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    out[2 * i] = points[i].x();
    out[2 * i + 1] = points[i].y();
  }
  return out;
}

}  // namespace snl
