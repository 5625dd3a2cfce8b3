#include "snl/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace snl {
namespace {

json point_list(const std::vector<Point2> &pts) {
  json arr = json::array();
  for (const Point2 &p : pts) arr.push_back({p.x(), p.y()});
  return arr;
}

std::vector<Point2> points_from(const json &j, const char *field) {
  if (!j.is_array()) throw InvalidArgument(std::string(field) + " must be an array");
  std::vector<Point2> out;
  for (const json &p : j) {
    if (!p.is_array() || p.size() != 2) {
      throw InvalidArgument(std::string(field) + " entries must be [x, y] pairs");
    }
    out.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  return out;
}

json vector_json(const VectorXd &v) { return std::vector<double>(v.data(), v.data() + v.size()); }

VectorXd vector_from(const json &j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

// Wraps nlohmann's type and key errors in the library's error type.
template <class Fn>
auto parse(const char *what, Fn &&fn) {
  try {
    return fn();
  } catch (const json::exception &e) {
    throw InvalidArgument(std::string("malformed ") + what + ": " + e.what());
  }
}

}  // namespace

json to_json(const NoiseWeights &w) { return {{"a", w.a}, {"b", w.b}, {"c", w.c}}; }

NoiseWeights weights_from_json(const json &j) {
  return parse("weights", [&] {
    return NoiseWeights{j.at("a").get<double>(), j.at("b").get<double>(),
                        j.at("c").get<double>()};
  });
}

json to_json(const NoiseSpec &s) {
  return {{"delta_budget", s.delta_budget},
          {"weights", to_json(s.weights)},
          {"distribution", std::string(to_string(s.distribution))},
          {"seed", s.seed}};
}

NoiseSpec noise_spec_from_json(const json &j) {
  return parse("noise spec", [&] {
    NoiseSpec s;
    s.delta_budget = j.at("delta_budget").get<double>();
    if (j.contains("weights")) s.weights = weights_from_json(j.at("weights"));
    if (j.contains("distribution")) {
      s.distribution = parse_distribution(j.at("distribution").get<std::string>());
    }
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    return s;
  });
}

json to_json(const NoiseDraw &d) {
  return {{"mu", d.mu}, {"e", d.e}, {"epsilon", point_list(d.epsilon)}};
}

NoiseDraw noise_draw_from_json(const json &j) {
  return parse("noise draw", [&] {
    return NoiseDraw{j.at("mu").get<std::vector<double>>(), j.at("e").get<std::vector<double>>(),
                     points_from(j.at("epsilon"), "epsilon")};
  });
}

json to_json(const Scenario &s) {
  const SensorNetwork &net = s.network;
  json j = {{"anchors", point_list(net.anchors_true())},
            {"non_anchors_true", point_list(net.non_anchors_true())},
            {"sensing_range", net.sensing_range()}};
  if (s.noise) j["noise"] = to_json(*s.noise);
  return j;
}

Scenario scenario_from_json(const json &j) {
  return parse("scenario", [&] {
    Scenario s{SensorNetwork::build(points_from(j.at("non_anchors_true"), "non_anchors_true"),
                                    points_from(j.at("anchors"), "anchors"),
                                    j.at("sensing_range").get<double>()),
               std::nullopt};
    if (j.contains("noise") && !j.at("noise").is_null()) {
      s.noise = noise_spec_from_json(j.at("noise"));
    }
    return s;
  });
}

json to_json(const StationaryPoint &p) {
  return {{"x", vector_json(p.x)},
          {"phi", p.value},
          {"grad_inf_norm", p.grad_inf_norm},
          {"min_hess_eigenvalue", p.min_hess_eigenvalue},
          {"max_hess_eigenvalue", p.max_hess_eigenvalue},
          {"classification", std::string(to_string(p.classification))},
          {"iterations", p.iterations},
          {"start_index", p.start_index},
          {"converged", p.converged}};
}

StationaryPoint stationary_point_from_json(const json &j) {
  return parse("stationary point", [&] {
    StationaryPoint p;
    p.x = vector_from(j.at("x"));
    p.value = j.at("phi").get<double>();
    p.grad_inf_norm = j.at("grad_inf_norm").get<double>();
    p.min_hess_eigenvalue = j.at("min_hess_eigenvalue").get<double>();
    p.max_hess_eigenvalue = j.at("max_hess_eigenvalue").get<double>();
    p.classification = parse_classification(j.at("classification").get<std::string>());
    p.iterations = j.at("iterations").get<int>();
    p.start_index = j.at("start_index").get<int>();
    p.converged = j.at("converged").get<bool>();
    return p;
  });
}

json to_json(const SolveResult &r) {
  json distinct = json::array();
  for (const auto &p : r.distinct) distinct.push_back(to_json(p));
  json per_start = json::array();
  for (const auto &p : r.per_start) per_start.push_back(to_json(p));
  return {{"best", to_json(r.best)},
          {"distinct", std::move(distinct)},
          {"per_start", std::move(per_start)},
          {"globally_unique_evidence", r.globally_unique_evidence},
          {"mle", r.mle}};
}

SolveResult solve_result_from_json(const json &j) {
  return parse("solve result", [&] {
    SolveResult r;
    r.best = stationary_point_from_json(j.at("best"));
    for (const json &p : j.at("distinct")) r.distinct.push_back(stationary_point_from_json(p));
    for (const json &p : j.at("per_start")) r.per_start.push_back(stationary_point_from_json(p));
    r.globally_unique_evidence = j.at("globally_unique_evidence").get<double>();
    r.mle = j.at("mle").get<double>();
    return r;
  });
}

json to_json(const DeltaReport &r) {
  json trace = json::array();
  for (const auto &t : r.trace) {
    trace.push_back({{"stage", t.stage},
                     {"delta1", t.delta1},
                     {"delta2", t.delta2},
                     {"value", t.value},
                     {"runs", t.runs},
                     {"passed", t.passed}});
  }
  return {{"delta1", r.delta1},
          {"phi1", r.phi1},
          {"delta2", r.delta2},
          {"phi2", r.phi2},
          {"delta", r.delta},
          {"weights", to_json(r.weights)},
          {"weight_convention", r.weight_convention},
          {"hessian_pd_verified", r.hessian_pd_verified},
          {"outer_radius", r.outer_radius},
          {"halvings", r.halvings},
          {"phi_values_are_upper_estimates", true},
          {"trace", std::move(trace)}};
}

DeltaReport delta_report_from_json(const json &j) {
  return parse("delta report", [&] {
    DeltaReport r;
    r.delta1 = j.at("delta1").get<double>();
    r.phi1 = j.at("phi1").get<double>();
    r.delta2 = j.at("delta2").get<double>();
    r.phi2 = j.at("phi2").get<double>();
    r.delta = j.at("delta").get<double>();
    r.weights = weights_from_json(j.at("weights"));
    r.weight_convention = j.at("weight_convention").get<std::string>();
    r.hessian_pd_verified = j.at("hessian_pd_verified").get<bool>();
    r.outer_radius = j.at("outer_radius").get<double>();
    r.halvings = j.at("halvings").get<int>();
    for (const json &t : j.at("trace")) {
      r.trace.push_back({t.at("stage").get<std::string>(), t.at("delta1").get<double>(),
                         t.at("delta2").get<double>(), t.at("value").get<double>(),
                         t.at("runs").get<int>(), t.at("passed").get<int>()});
    }
    return r;
  });
}

json read_json_file(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error &e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path &path, const json &j) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

Scenario read_scenario(const std::filesystem::path &path) {
  return scenario_from_json(read_json_file(path));
}

void write_scenario(const std::filesystem::path &path, const Scenario &s) {
  write_json_file(path, to_json(s));
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_matrix_csv(const std::filesystem::path &path, const MatrixXd &m) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
}

}  // namespace snl
