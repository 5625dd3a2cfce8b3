#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "cli.hpp"
#include "snl/delta_bound.hpp"
#include "snl/fixtures.hpp"
#include "snl/io.hpp"
#include "snl/log.hpp"
#include "snl/potential.hpp"
#include "snl/rigidity.hpp"

namespace snl::cli {
namespace {

struct Globals {
  std::uint64_t seed = 0;
  int threads = 1;
  bool json = false;
  bool csv = false;
  std::string output;
};

Box parse_box(const std::vector<double> &v) {
  if (v.size() == 1) return {{0.0, 0.0}, {v[0], v[0]}};
  if (v.size() == 4) return {{v[0], v[1]}, {v[2], v[3]}};
  throw InvalidArgument("--box takes a side length or xmin ymin xmax ymax");
}

std::string diagnosis(const SensorNetwork &net) {
  if (is_generically_globally_rigid(net) == Verdict::kYes) return "globally rigid";
  if (is_generically_rigid(net)) return "rigid";
  return "flexible";
}

// ---- generate

struct GenerateArgs {
  int n = 2;
  int m = 3;
  double range = 12.0;
  std::vector<double> box{10.0};
  bool allow_nonrigid = false;
  std::string fixture;
  std::optional<double> noise_budget;
};

int cmd_generate(const GenerateArgs &a, const Globals &g, std::ostream &out, std::ostream &err) {
  std::optional<SensorNetwork> net;
  if (!a.fixture.empty()) {
    static const std::map<std::string, SensorNetwork (*)()> table = {
        {"demo5", fixtures::demo5},
        {"net10", fixtures::net10},
        {"trilateration", fixtures::trilateration},
        {"four-bar", fixtures::four_bar}};
    const auto it = table.find(a.fixture);
    if (it == table.end()) throw InvalidArgument("unknown fixture '" + a.fixture + "'");
    net = it->second();
  } else {
    if (a.n < 1) throw InvalidArgument("--n must be at least 1");
    if (a.m < 3) throw InvalidArgument("--m must be at least 3");
    const Box box = parse_box(a.box);
    for (int attempt = 0; attempt < 100; ++attempt) {
      net = generate_network(a.n, a.m, a.range, box, g.seed + static_cast<std::uint64_t>(attempt));
      if (is_generically_globally_rigid(*net) == Verdict::kYes) break;
    }
  }

  const std::string diag = diagnosis(*net);
  Scenario scenario{*net, std::nullopt};
  if (a.noise_budget) {
    scenario.noise =
        NoiseSpec{*a.noise_budget, noise_weights(*net), NoiseDistribution::kUniformBall, g.seed};
  }
  if (g.output.empty()) {
    out << to_json(scenario).dump(2) << '\n';
  } else {
    write_scenario(g.output, scenario);
  }
  err << "nodes: " << net->num_vertices() << " (" << net->num_non_anchors() << " non-anchors, "
      << net->num_anchors() << " anchors), edges: " << net->num_edges() << '\n'
      << "diagnosis: " << diag << '\n';
  if (diag != "globally rigid" && !a.allow_nonrigid) {
    err << "error: scenario is not generically globally rigid (use --allow-nonrigid)\n";
    return kRigidity;
  }
  return kOk;
}

// ---- solve

struct SolveArgs {
  std::string scenario;
  int starts = 64;
  double tol = 1e-9;
  std::string method = "gauss-newton-lm";
  std::string dump_dir;
};

int cmd_solve(const SolveArgs &a, const Globals &g, std::ostream &out, std::ostream &err) {
  const Scenario sc = read_scenario(a.scenario);
  const SensorNetwork &net = sc.network;
  const NoiseDraw draw = sc.noise ? draw_noise(net, *sc.noise) : NoiseDraw::zero(net);
  const MeasurementSet meas = measure(net, draw);

  SolveOptions opts;
  opts.starts = a.starts;
  opts.grad_tolerance = a.tol;
  opts.seed = g.seed;
  opts.threads = g.threads;
  opts.method = parse_method(a.method);
  const SolveResult res = multistart_solve(net, meas, opts);

  json j = {{"noise", to_json(draw)}, {"result", to_json(res)}};
  if (sc.noise) j["budget"] = weighted_norm(draw, sc.noise->weights);
  if (!g.output.empty()) write_json_file(g.output, j);

  if (!a.dump_dir.empty()) {
    const std::filesystem::path dir(a.dump_dir);
    std::filesystem::create_directories(dir);
    const Framework fw(net, res.best.x);
    const RigidityMatrixSet mats = rigidity_matrices(fw, meas);
    write_matrix_csv(dir / "R.csv", mats.full);
    write_matrix_csv(dir / "R_r.csv", mats.reduced);
    write_matrix_csv(dir / "Rbar_r.csv", mats.revised_reduced);
    write_matrix_csv(dir / "Lambda.csv", lambda_matrix(residual_vector(fw, meas), net));
  }

  if (g.json) {
    if (g.output.empty()) out << j.dump(2) << '\n';
  } else {
    out << "mle            " << format_double(res.mle) << '\n'
        << "phi            " << format_double(res.best.value) << '\n'
        << "classification " << to_string(res.best.classification) << '\n'
        << "evidence       " << res.globally_unique_evidence << '\n'
        << "distinct       " << res.distinct.size() << '\n';
  }
  if (!res.any_converged()) {
    err << "error: no start reached the gradient tolerance\n";
    return kNoConvergence;
  }
  return kOk;
}

// ---- delta

struct DeltaArgs {
  std::string scenario;
  double delta1 = 0.1;
  int hessian_samples = 32;
};

int cmd_delta(const DeltaArgs &a, const Globals &g, std::ostream &out, std::ostream &err) {
  const Scenario sc = read_scenario(a.scenario);
  DeltaOptions opts;
  opts.seed = g.seed;
  opts.threads = g.threads;
  opts.hessian_samples = a.hessian_samples;
  DeltaReport rep;
  try {
    rep = delta_bound(sc.network, a.delta1, opts);
  } catch (const RigidityError &e) {
    err << "error: " << e.what() << '\n';
    return kRigidity;
  }
  const json j = to_json(rep);
  if (!g.output.empty()) write_json_file(g.output, j);
  if (g.json) {
    if (g.output.empty()) out << j.dump(2) << '\n';
    return kOk;
  }
  out << "delta1 (after " << rep.halvings << " halvings)  " << format_double(rep.delta1) << '\n'
      << "phi1 (upper estimate)       " << format_double(rep.phi1) << '\n'
      << "delta2                      " << format_double(rep.delta2) << '\n'
      << "phi2 (upper estimate)       " << format_double(rep.phi2) << '\n'
      << "delta = min(delta2, phi1/2) " << format_double(rep.delta) << '\n'
      << "weights a, b, c             " << format_double(rep.weights.a) << ", "
      << format_double(rep.weights.b) << ", " << format_double(rep.weights.c) << '\n'
      << "hessian pd verified         " << (rep.hessian_pd_verified ? "yes" : "no") << '\n'
      << "outer radius                " << format_double(rep.outer_radius) << '\n';
  return kOk;
}

// ---- sweep

struct SweepArgs {
  std::string scenario;
  std::vector<double> deltas{0.05, 0.1, 0.2, 0.5, 1.0};
  int trials = 50;
  int starts = 64;
};

int cmd_sweep(const SweepArgs &a, const Globals &g, std::ostream &out, std::ostream &err) {
  const Scenario sc = read_scenario(a.scenario);
  SweepConfig cfg;
  cfg.deltas = a.deltas;
  cfg.trials = a.trials;
  cfg.seed = g.seed;
  cfg.threads = g.threads;
  cfg.weights = sc.noise ? sc.noise->weights : noise_weights(sc.network);
  if (sc.noise) cfg.distribution = sc.noise->distribution;
  cfg.solve.starts = a.starts;
  const std::vector<SweepRow> rows = run_sweep(sc.network, cfg);

  if (!g.output.empty()) {
    std::ofstream f(g.output);
    if (!f) throw InvalidArgument("cannot write " + g.output);
    write_sweep_csv(f, rows);
  }
  if (g.csv && g.output.empty()) {
    write_sweep_csv(out, rows);
    return kOk;
  }
  auto &summary = g.csv ? err : out;
  summary << "delta,median_mle\n";
  for (const auto &[d, m] : median_mle(rows)) {
    summary << format_double(d) << ',' << format_double(m) << '\n';
  }
  return kOk;
}

// ---- verify

int cmd_verify(const std::string &path, const Globals &g, std::ostream &out) {
  const Scenario sc = read_scenario(path);
  const std::vector<Check> checks = verify_scenario(sc.network, g.seed, g.threads);
  bool all = true;
  json j = json::array();
  for (const Check &c : checks) {
    all = all && c.passed;
    j.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  if (!g.output.empty()) write_json_file(g.output, j);
  if (g.json) {
    if (g.output.empty()) out << j.dump(2) << '\n';
  } else {
    for (const Check &c : checks) {
      out << (c.passed ? "PASS " : "FAIL ") << std::left << std::setw(22) << c.name << c.detail
          << '\n';
    }
  }
  return all ? kOk : kVerifyFailed;
}

}  // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Sensor network localization as a potential game"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  auto *json_flag = app.add_flag("--json", g.json, "Print JSON instead of a table");
  app.add_flag("--csv", g.csv, "Print CSV rows (sweep)")->excludes(json_flag);
  app.add_option("-o,--output", g.output, "Output file");

  GenerateArgs ga;
  auto *gen = app.add_subcommand("generate", "Write a scenario file");
  gen->add_option("--n", ga.n, "Non-anchor count")->capture_default_str();
  gen->add_option("--m", ga.m, "Anchor count")->capture_default_str();
  gen->add_option("--range", ga.range, "Sensing range")->capture_default_str();
  gen->add_option("--box", ga.box, "Side length, or xmin ymin xmax ymax")->expected(1, 4);
  gen->add_flag("--allow-nonrigid", ga.allow_nonrigid, "Keep a scenario that is not globally rigid");
  gen->add_option("--fixture", ga.fixture, "demo5, net10, trilateration or four-bar");
  gen->add_option("--noise", ga.noise_budget, "Attach a noise spec with this budget");

  SolveArgs sa;
  auto *solve = app.add_subcommand("solve", "Multistart Nash equilibrium search");
  solve->add_option("scenario", sa.scenario)->required()->check(CLI::ExistingFile);
  solve->add_option("--starts", sa.starts)->check(CLI::PositiveNumber)->capture_default_str();
  solve->add_option("--tol", sa.tol, "Gradient tolerance")->check(CLI::PositiveNumber);
  solve->add_option("--method", sa.method)
      ->check(CLI::IsMember({"gauss-newton-lm", "gradient-descent-armijo"}))
      ->capture_default_str();
  solve->add_option("--dump-matrices", sa.dump_dir, "Directory for R, R_r, Rbar_r, Lambda CSVs");

  DeltaArgs da;
  auto *delta = app.add_subcommand("delta", "Certify a noise bound");
  delta->add_option("scenario", da.scenario)->required()->check(CLI::ExistingFile);
  delta->add_option("--delta1", da.delta1)->check(CLI::PositiveNumber)->capture_default_str();
  delta->add_option("--hessian-samples", da.hessian_samples)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  SweepArgs wa;
  auto *sweep = app.add_subcommand("sweep", "MLE over noise budgets");
  sweep->add_option("scenario", wa.scenario)->required()->check(CLI::ExistingFile);
  sweep->add_option("--deltas", wa.deltas)->delimiter(',')->capture_default_str();
  sweep->add_option("--trials", wa.trials)->check(CLI::PositiveNumber)->capture_default_str();
  sweep->add_option("--starts", wa.starts)->check(CLI::PositiveNumber)->capture_default_str();

  std::string verify_path;
  auto *verify = app.add_subcommand("verify", "Run the invariant suite on a scenario");
  verify->add_option("scenario", verify_path)->required()->check(CLI::ExistingFile);

  for (auto *sub : {gen, solve, delta, sweep, verify}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << e.what() << '\n';
    return kUsage;
  }

  try {
    configure_logging_from_env();
    if (gen->parsed()) return cmd_generate(ga, g, out, err);
    if (solve->parsed()) return cmd_solve(sa, g, out, err);
    if (delta->parsed()) return cmd_delta(da, g, out, err);
    if (sweep->parsed()) return cmd_sweep(wa, g, out, err);
    return cmd_verify(verify_path, g, out);
  } catch (const InvalidArgument &e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const RigidityError &e) {
    err << "error: " << e.what() << '\n';
    return kRigidity;
  } catch (const ConvergenceError &e) {
    err << "error: " << e.what() << '\n';
    return kNoConvergence;
  }
}

}  // namespace snl::cli
