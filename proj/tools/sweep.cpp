#include <algorithm>
#include <cmath>
#include <ostream>

#include "cli.hpp"
#include "snl/io.hpp"
#include "snl/parallel.hpp"

namespace snl::cli {

std::vector<SweepRow> run_sweep(const SensorNetwork &net, const SweepConfig &config) {
  if (config.trials < 1) throw InvalidArgument("trials must be at least 1");
  if (config.deltas.empty()) throw InvalidArgument("at least one delta is required");
  for (double d : config.deltas) {
    if (!(d >= 0.0) || !std::isfinite(d)) throw InvalidArgument("deltas must be finite and >= 0");
  }

  const std::size_t trials = static_cast<std::size_t>(config.trials);
  std::vector<SweepRow> rows(config.deltas.size() * trials);
  parallel_for(rows.size(), config.threads, [&](std::size_t k) {
    const double delta = config.deltas[k / trials];
    const int trial = static_cast<int>(k % trials);
    const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(trial);

    const NoiseDraw draw =
        draw_noise(net, NoiseSpec{delta, config.weights, config.distribution, seed});
    SolveOptions opts = config.solve;
    opts.seed = seed;
    opts.threads = 1;
    const SolveResult res = multistart_solve(net, measure(net, draw), opts);

    rows[k] = {delta, trial, seed, res.mle, res.best.value, weighted_norm(draw, config.weights),
               res.best.converged};
  });
  return rows;
}

void write_sweep_csv(std::ostream &os, const std::vector<SweepRow> &rows) {
  os << "delta,trial,seed,mle,phi,budget,converged\n";
  for (const SweepRow &r : rows) {
    os << format_double(r.delta) << ',' << r.trial << ',' << r.seed << ','
       << format_double(r.mle) << ',' << format_double(r.phi) << ','
       << format_double(r.budget) << ',' << (r.converged ? 1 : 0) << '\n';
  }
}

std::vector<std::pair<double, double>> median_mle(const std::vector<SweepRow> &rows) {
  std::vector<double> order;
  for (const SweepRow &r : rows) {
    if (std::find(order.begin(), order.end(), r.delta) == order.end()) order.push_back(r.delta);
  }
  std::vector<std::pair<double, double>> out;
  for (double d : order) {
    std::vector<double> v;
    for (const SweepRow &r : rows) {
      if (r.delta == d) v.push_back(r.mle);
    }
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    out.emplace_back(d, n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]));
  }
  return out;
}

}  // namespace snl::cli
