#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace snl {

using Point2 = Eigen::Vector2d;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Index pair into the owning network. For ss edges both entries are
// non-anchor indices (first < second); for as edges `first` is the non-anchor
// and `second` the anchor index (0-based within the anchor list); for aa
// edges both are anchor indices.
struct Edge {
  int first = 0;
  int second = 0;

  friend bool operator==(const Edge &, const Edge &) = default;
};

// Thrown when an input violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The scenario is not (numerically) generically globally rigid, so the
// localization guarantees do not apply.
class RigidityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace snl
