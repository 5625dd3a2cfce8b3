#include <gtest/gtest.h>

#include <cmath>

#include "snl/fixtures.hpp"
#include "snl/network.hpp"

namespace snl {
namespace {

std::vector<Edge> edges(std::initializer_list<std::pair<int, int>> list) {
  std::vector<Edge> out;
  for (auto [a, b] : list) out.push_back({a, b});
  return out;
}

TEST(BuildEdges, SmallExampleByRange) {
  const auto net = SensorNetwork::build({{0, 0}, {1, 0}}, {{0, 1}, {1, 1}, {0.5, -0.5}}, 1.3);
  EXPECT_EQ(net.ss_edges(), edges({{0, 1}}));
  EXPECT_EQ(net.as_edges(), edges({{0, 0}, {0, 2}, {1, 1}, {1, 2}}));
  EXPECT_EQ(net.aa_edges(), edges({{0, 1}, {0, 2}, {1, 2}}));
  EXPECT_EQ(net.num_edges(), 8);
}

TEST(BuildEdges, IsolatedNodeHasNoEdges) {
  const auto net = SensorNetwork::build({{50, 50}}, {{0, 0}, {1, 0}, {0, 1}}, 0.1);
  EXPECT_TRUE(net.ss_edges().empty());
  EXPECT_TRUE(net.as_edges().empty());
  EXPECT_EQ(net.aa_edges().size(), 3u);
}

TEST(BuildEdges, LargeRangeGivesCompleteGraphMatchingPairEnumeration) {
  const auto net = generate_network(7, 3, 2.9, {{0, 0}, {1, 1}}, 11);
  EXPECT_EQ(net.ss_edges().size(), 21u);
  EXPECT_EQ(net.as_edges().size(), 21u);
  EXPECT_EQ(net.aa_edges().size(), 3u);

  // Brute force over all vertex pairs.
  std::size_t within = 0;
  for (int u = 0; u < net.num_vertices(); ++u) {
    for (int v = u + 1; v < net.num_vertices(); ++v) {
      if ((net.vertex(u) - net.vertex(v)).norm() <= 2.9) ++within;
    }
  }
  EXPECT_EQ(within, 45u);
}

TEST(BuildEdges, OrderingContract) {
  const auto net = fixtures::net10();
  const auto all = net.vertex_edges();
  const int n = net.num_non_anchors();
  const std::size_t nss = net.ss_edges().size();
  const std::size_t nas = net.as_edges().size();
  ASSERT_EQ(all.size(), nss + nas + net.aa_edges().size());
  for (std::size_t k = 0; k < all.size(); ++k) {
    const int anchors = (all[k].first >= n) + (all[k].second >= n);
    EXPECT_EQ(anchors, k < nss ? 0 : k < nss + nas ? 1 : 2) << k;
    EXPECT_LT(all[k].first, all[k].second);
    if (k > 0 && anchors == (all[k - 1].first >= n) + (all[k - 1].second >= n)) {
      EXPECT_TRUE(all[k - 1].first < all[k].first ||
                  (all[k - 1].first == all[k].first && all[k - 1].second < all[k].second));
    }
  }
}

TEST(BuildEdges, EachUndirectedPairOnce) {
  const auto net = fixtures::net10();
  const auto all = net.vertex_edges();
  for (std::size_t a = 0; a < all.size(); ++a) {
    for (std::size_t b = a + 1; b < all.size(); ++b) EXPECT_FALSE(all[a] == all[b]);
  }
}

TEST(BuildEdges, RejectsBadInput) {
  const std::vector<Point2> anchors{{0, 0}, {1, 0}, {0, 1}};
  EXPECT_THROW(SensorNetwork::build({{0, 0}}, anchors, 1.0), InvalidArgument);  // on an anchor
  EXPECT_THROW(SensorNetwork::build({{0.5, 0.5}, {0.5, 0.5}}, anchors, 1.0), InvalidArgument);
  EXPECT_THROW(SensorNetwork::build({{0.5, 0.5}}, {{0, 0}, {1, 0}}, 1.0), InvalidArgument);
  EXPECT_THROW(SensorNetwork::build({{0.5, 0.5}}, anchors, 0.0), InvalidArgument);
  EXPECT_THROW(SensorNetwork::build({{NAN, 0.5}}, anchors, 1.0), InvalidArgument);
  EXPECT_THROW(SensorNetwork::build({}, anchors, 1.0), InvalidArgument);
}

TEST(Network, TrueProfileAndBoundingBox) {
  const auto net = fixtures::trilateration();
  EXPECT_EQ(net.true_profile(), (VectorXd(2) << 0.3, 0.4).finished());
  const Box b = net.bounding_box();
  EXPECT_EQ(b.lo, Point2(0, 0));
  EXPECT_EQ(b.hi, Point2(1, 1));
  const Box s = b.scaled(2.0);
  EXPECT_EQ(s.lo, Point2(-0.5, -0.5));
  EXPECT_EQ(s.hi, Point2(1.5, 1.5));
  EXPECT_DOUBLE_EQ(net.max_anchor_edge_length(), std::hypot(0.7, 0.4));
}

TEST(Generate, DeterministicAndInsideBox) {
  const Box box{{-1, 2}, {3, 5}};
  const auto a = generate_network(5, 4, 1.5, box, 99);
  const auto b = generate_network(5, 4, 1.5, box, 99);
  EXPECT_EQ(a.true_profile(), b.true_profile());
  EXPECT_EQ(a.anchors_true(), b.anchors_true());
  for (int v = 0; v < a.num_vertices(); ++v) EXPECT_TRUE(box.contains(a.vertex(v)));
  const auto c = generate_network(5, 4, 1.5, box, 100);
  EXPECT_NE(a.true_profile(), c.true_profile());
}

TEST(Generate, NoThreeCollinear) {
  const auto net = generate_network(6, 3, 1.0, {{0, 0}, {1, 1}}, 5);
  const int n = net.num_vertices();
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      for (int c = b + 1; c < n; ++c) {
        const Point2 u = net.vertex(b) - net.vertex(a);
        const Point2 v = net.vertex(c) - net.vertex(a);
        const double sine = std::abs(u.x() * v.y() - u.y() * v.x()) / (u.norm() * v.norm());
        EXPECT_GT(sine, 1e-9);
      }
    }
  }
}

TEST(Fixtures, ScaledMultipliesEverything) {
  const auto net = fixtures::scaled(fixtures::trilateration(), 2.0);
  EXPECT_EQ(net.true_profile(), (VectorXd(2) << 0.6, 0.8).finished());
  EXPECT_DOUBLE_EQ(net.sensing_range(), 4.0);
  EXPECT_EQ(net.as_edges().size(), 3u);
}

}  // namespace
}  // namespace snl
