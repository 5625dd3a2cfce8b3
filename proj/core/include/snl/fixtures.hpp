#pragma once

#include "snl/network.hpp"

// Small reference scenarios used by the tests, the benchmarks and
// `snl generate --fixture`.
namespace snl::fixtures {

// Two non-anchors inside an anchor triangle of side 10; complete graph.
SensorNetwork demo5();

// Seven non-anchors and three anchors in a 3x3 square with range 1.8.
// Generically globally rigid; large noise breaks the recovered shape.
SensorNetwork net10();

// One non-anchor at (0.3, 0.4) and anchors (0,0), (1,0), (0,1).
SensorNetwork trilateration();

// Two non-anchors hinged to two anchors and to each other: a four-bar
// linkage with one degree of freedom.
SensorNetwork four_bar();

// Every position multiplied by `factor`, range included.
SensorNetwork scaled(const SensorNetwork &net, double factor);

}  // namespace snl::fixtures
