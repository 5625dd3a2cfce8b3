#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "snl/delta_bound.hpp"
#include "snl/network.hpp"
#include "snl/noise.hpp"
#include "snl/solver.hpp"

namespace snl {

using nlohmann::json;

// A scenario file: true positions, sensing range and an optional noise
// specification. Edge sets are recomputed on load.
struct Scenario {
  SensorNetwork network;
  std::optional<NoiseSpec> noise;
};

json to_json(const Scenario &s);
Scenario scenario_from_json(const json &j);

json to_json(const NoiseWeights &w);
NoiseWeights weights_from_json(const json &j);
json to_json(const NoiseSpec &s);
NoiseSpec noise_spec_from_json(const json &j);
json to_json(const NoiseDraw &d);
NoiseDraw noise_draw_from_json(const json &j);

json to_json(const StationaryPoint &p);
StationaryPoint stationary_point_from_json(const json &j);
json to_json(const SolveResult &r);
SolveResult solve_result_from_json(const json &j);

json to_json(const DeltaReport &r);
DeltaReport delta_report_from_json(const json &j);

/// Reads and parses a JSON file. Throws InvalidArgument on I/O or parse
/// errors.
json read_json_file(const std::filesystem::path &path);
/// Two-space indented dump followed by a newline.
void write_json_file(const std::filesystem::path &path, const json &j);

Scenario read_scenario(const std::filesystem::path &path);
void write_scenario(const std::filesystem::path &path, const Scenario &s);

/// Decimal with 17 significant digits, enough to round-trip a double.
std::string format_double(double v);
void write_matrix_csv(const std::filesystem::path &path, const MatrixXd &m);

}  // namespace snl
