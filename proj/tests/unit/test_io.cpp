#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "snl/delta_bound.hpp"
#include "snl/fixtures.hpp"
#include "snl/io.hpp"

namespace snl {
namespace {

std::filesystem::path temp_path(const std::string &name) {
  const auto dir = std::filesystem::temp_directory_path() / "snl_io_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void expect_same_network(const SensorNetwork &a, const SensorNetwork &b) {
  EXPECT_EQ(a.non_anchors_true(), b.non_anchors_true());
  EXPECT_EQ(a.anchors_true(), b.anchors_true());
  EXPECT_EQ(a.sensing_range(), b.sensing_range());
  EXPECT_EQ(a.vertex_edges(), b.vertex_edges());
}

TEST(Json, ScenarioRoundTripThroughFile) {
  const Scenario s{fixtures::net10(),
                   NoiseSpec{0.25, {1.0, 2.0, 3.5}, NoiseDistribution::kGaussianRejection, 17}};
  const auto path = temp_path("scenario.json");
  write_scenario(path, s);
  const Scenario back = read_scenario(path);
  expect_same_network(s.network, back.network);
  ASSERT_TRUE(back.noise.has_value());
  EXPECT_EQ(*back.noise, *s.noise);
  EXPECT_EQ(to_json(back), to_json(s));
}

TEST(Json, ScenarioWithoutNoise) {
  const Scenario s{fixtures::demo5(), std::nullopt};
  const Scenario back = scenario_from_json(to_json(s));
  expect_same_network(s.network, back.network);
  EXPECT_FALSE(back.noise.has_value());
}

TEST(Json, NoiseDrawRoundTripIsBitExact) {
  const auto net = fixtures::net10();
  const NoiseDraw d = draw_noise(net, {0.3, {}, NoiseDistribution::kUniformBall, 5});
  EXPECT_EQ(noise_draw_from_json(json::parse(to_json(d).dump())), d);
}

TEST(Json, SolveResultRoundTrip) {
  const auto net = fixtures::demo5();
  const auto meas = measure(net, draw_noise(net, {0.05, {}, NoiseDistribution::kUniformBall, 1}));
  SolveOptions opts;
  opts.starts = 8;
  const SolveResult r = multistart_solve(net, meas, opts);
  const SolveResult back = solve_result_from_json(json::parse(to_json(r).dump()));
  EXPECT_EQ(to_json(back), to_json(r));
  EXPECT_EQ(back.best.x, r.best.x);
  EXPECT_EQ(back.best.classification, r.best.classification);
  EXPECT_EQ(back.per_start.size(), r.per_start.size());
}

TEST(Json, DeltaReportRoundTrip) {
  DeltaReport r;
  r.delta1 = 0.1;
  r.phi1 = 0.1 + 1e-17;
  r.delta2 = 0.05;
  r.phi2 = 1.0 / 3.0;
  r.delta = 0.05;
  r.weights = {1, 2, 32};
  r.hessian_pd_verified = true;
  r.outer_radius = 400.0;
  r.halvings = 2;
  r.weight_convention = kWeightConvention;
  r.trace.push_back({"phi2", 0.1, 0.05, 1.0 / 7.0, 96, 90});
  EXPECT_EQ(delta_report_from_json(json::parse(to_json(r).dump())), r);
  EXPECT_TRUE(to_json(r).at("phi_values_are_upper_estimates").get<bool>());
}

TEST(Json, MalformedInputIsAnInvalidArgument) {
  EXPECT_THROW(scenario_from_json(json::parse(R"({"nonAnchors": 3})")), InvalidArgument);
  const auto path = temp_path("broken.json");
  std::ofstream(path) << "{ not json";
  EXPECT_THROW(read_json_file(path), InvalidArgument);
  EXPECT_THROW(read_json_file(temp_path("missing.json")), InvalidArgument);
}

TEST(FormatDouble, RoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 8.4433e-4}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}

TEST(MatrixCsv, WritesRowsAndColumns) {
  const auto path = temp_path("m.csv");
  write_matrix_csv(path, (MatrixXd(2, 3) << 1, 2, 3, 4, 5, 0.1).finished());
  std::ifstream f(path);
  std::string line;
  std::getline(f, line);
  EXPECT_EQ(line, "1,2,3");
  std::getline(f, line);
  EXPECT_EQ(line, "4,5,0.10000000000000001");
}

}  // namespace
}  // namespace snl
