#include "snl/fixtures.hpp"

namespace snl::fixtures {

SensorNetwork demo5() {
  return SensorNetwork::build({{3.5, 3.0}, {6.2, 4.1}},
                              {{0.0, 0.0}, {10.0, 0.0}, {5.0, 8.66}}, 12.0);
}

SensorNetwork net10() {
  return SensorNetwork::build({{1.556, 1.499}, {2.623, 2.484}, {0.708, 0.053}, {2.701, 0.441},
                               {2.642, 0.066}, {0.906, 1.578}, {1.055, 0.643}},
                              {{1.066, 0.960}, {1.801, 2.719}, {1.407, 1.330}}, 1.8);
}

SensorNetwork trilateration() {
  return SensorNetwork::build({{0.3, 0.4}}, {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}, 2.0);
}

SensorNetwork four_bar() {
  return SensorNetwork::build({{0.2, 1.1}, {2.9, 0.9}},
                              {{0.0, 0.0}, {3.0, 0.0}, {1.5, 10.0}}, 2.8);
}

SensorNetwork scaled(const SensorNetwork &net, double factor) {
  std::vector<Point2> s = net.non_anchors_true();
  std::vector<Point2> a = net.anchors_true();
  for (Point2 &p : s) p *= factor;
  for (Point2 &p : a) p *= factor;
  return SensorNetwork::build(std::move(s), std::move(a), net.sensing_range() * factor);
}

}  // namespace snl::fixtures
