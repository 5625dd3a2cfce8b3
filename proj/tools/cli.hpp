#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "snl/network.hpp"
#include "snl/noise.hpp"
#include "snl/solver.hpp"

namespace snl::cli {

enum ExitCode : int {
  kOk = 0,
  kVerifyFailed = 1,
  kUsage = 2,
  kRigidity = 3,
  kNoConvergence = 4,
};

// Parses argv and runs one subcommand. Output goes to `out`, diagnostics to
// `err`.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

struct SweepRow {
  double delta = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  double mle = 0.0;
  double phi = 0.0;     // potential at the best point
  double budget = 0.0;  // weighted norm of the draw
  bool converged = false;
};

struct SweepConfig {
  std::vector<double> deltas;
  int trials = 1;
  std::uint64_t seed = 0;
  NoiseWeights weights;
  NoiseDistribution distribution = NoiseDistribution::kUniformBall;
  SolveOptions solve;  // seed is replaced per trial
  int threads = 1;
};

/// Trial t uses seed `config.seed + t` for both the noise draw and the
/// solver, for every delta, so the deltas see the same noise directions.
/// Rows come back in (delta, trial) order.
std::vector<SweepRow> run_sweep(const SensorNetwork &net, const SweepConfig &config);

/// Header `delta,trial,seed,mle,phi,budget,converged`, reals with 17
/// significant digits.
void write_sweep_csv(std::ostream &os, const std::vector<SweepRow> &rows);

/// Median MLE per delta, in the order the deltas first appear.
std::vector<std::pair<double, double>> median_mle(const std::vector<SweepRow> &rows);

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Invariant suite on one scenario: edge sets, rigidity, the potential
/// identity, derivatives against finite differences, measurement identity,
/// zero-noise recovery and JSON round trip.
std::vector<Check> verify_scenario(const SensorNetwork &net, std::uint64_t seed, int threads);

}  // namespace snl::cli
