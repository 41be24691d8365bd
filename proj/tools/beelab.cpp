// beelab: command-line front end for experiments, suites and comparisons.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bee/errors.hpp"
#include "bee/harness/config.hpp"
#include "bee/harness/experiment.hpp"
#include "bee/harness/grid_compare.hpp"
#include "bee/harness/particle_compare.hpp"
#include "bee/harness/report.hpp"
#include "bee/harness/tabular_suite.hpp"

namespace fs = std::filesystem;
using namespace bee;
using namespace bee::harness;

namespace {

std::vector<std::uint64_t> shifted(std::vector<std::uint64_t> seeds, std::uint64_t offset) {
  for (auto& s : seeds) s += offset;
  return seeds;
}

std::string output_root() {
  const char* r = std::getenv(kOutputRootEnv);
  return r ? r : "";
}

int cmd_run(const std::string& path, std::uint64_t offset, bool quiet) {
  const auto cfg = load_config(path);
  RunOptions opts;
  opts.seed_offset = offset;
  opts.quiet = quiet;
  const auto res = run_experiment(cfg, opts);
  std::cout << "wrote " << res.manifest << '\n';
  for (const auto& s : res.seeds)
    std::cout << "seed " << s.seed << ' ' << s.status << ' ' << (fs::path(res.output_dir) / s.csv).string()
              << (s.injected ? " injected=" + std::to_string(s.injected) : "") << '\n';
  return res.exit_code;
}

int cmd_tabular_suite(int n_mdps) {
  TabularSuiteConfig cfg;
  cfg.n_mdps = n_mdps;
  bool ok = true;
  for (const auto& r : run_tabular_suites(cfg)) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  checks=" << r.checks << " worst=" << r.worst
              << " time=" << r.seconds << "s";
    if (!r.passed) std::cout << "  " << r.detail;
    std::cout << '\n';
    ok = ok && r.passed;
  }
  return ok ? 0 : 1;
}

int cmd_grid(const std::vector<double>& lambdas, const std::vector<std::uint64_t>& seeds, std::uint64_t offset) {
  GridCompareConfig cfg;
  cfg.lambdas = lambdas;
  cfg.seeds = shifted(seeds, offset);
  const auto res = grid_compare(cfg);
  std::cout << "shortest path " << res.optimal_path_length << ", free cells " << res.free_cells << '\n';
  std::cout << "lambda,seed,rounds,sweeps_to_optimal,unvisited_free_cells\n";
  for (const auto& r : res.runs)
    std::cout << r.lambda << ',' << r.seed << ',' << r.rounds << ',' << r.sweeps_to_optimal << ','
              << r.unvisited_free_cells << '\n';
  return 0;
}

int cmd_particle(const std::vector<std::string>& ops, const std::vector<int>& checkpoints,
                 const std::vector<std::uint64_t>& seeds, std::uint64_t offset, std::string heatmaps) {
  ParticleCompareConfig cfg;
  cfg.operators = ops;
  cfg.checkpoints = checkpoints;
  cfg.seeds = shifted(seeds, offset);
  if (!heatmaps.empty()) {
    const auto root = output_root();
    if (!root.empty() && fs::path(heatmaps).is_relative()) heatmaps = (fs::path(root) / heatmaps).string();
    fs::create_directories(heatmaps);
    cfg.heatmap_dir = heatmaps;
  }
  const auto res = particle_compare(cfg);
  std::cout << "seed,successes,operator,iteration,mae\n";
  for (const auto& r : res.runs)
    for (const auto& c : r.checkpoints)
      std::cout << r.seed << ',' << r.successes << ',' << c.op << ',' << c.iteration << ',' << c.mae << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"beelab: blended exploitation/exploration RL laboratory"};
  app.require_subcommand(1);
  std::uint64_t offset = 0;
  app.add_option("--seed-offset", offset, "Added to every seed (CI sharding)");

  auto* run = app.add_subcommand("run", "Run an experiment from a JSON config");
  std::string config;
  bool quiet = false;
  run->add_option("--config", config, "Config file")->required()->check(CLI::ExistingFile);
  run->add_flag("--quiet", quiet, "No per-seed progress on stderr");

  auto* suite = app.add_subcommand("tabular-suite", "Run the tabular operator property suites");
  int n_mdps = 50;
  suite->add_option("--mdps", n_mdps, "Random MDPs per suite");

  auto* grid = app.add_subcommand("grid-compare", "Online tabular learning on the grid maze for several lambdas");
  std::vector<double> lambdas{0.0, 0.5, 1.0};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  grid->add_option("--lambda", lambdas, "Comma-separated lambdas")->delimiter(',');
  grid->add_option("--seeds", seeds, "Comma-separated seeds")->delimiter(',');

  auto* particle = app.add_subcommand("particle-compare", "Offline Q iteration on random-walk particle data");
  std::vector<std::string> ops{"bee", "standard"};
  std::vector<int> checkpoints{100, 200, 500};
  std::string heatmaps;
  particle->add_option("--operators", ops, "Comma-separated operators (bee, standard)")->delimiter(',');
  particle->add_option("--checkpoints", checkpoints, "Comma-separated iteration checkpoints")->delimiter(',');
  particle->add_option("--seeds", seeds, "Comma-separated seeds")->delimiter(',');
  particle->add_option("--heatmaps", heatmaps, "Directory for CSV/PGM heatmaps");

  auto* report = app.add_subcommand("report", "Summary statistics of the run CSVs in a directory");
  std::string dir;
  report->add_option("--dir", dir, "Run directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config, offset, quiet);
    if (*suite) return cmd_tabular_suite(n_mdps);
    if (*grid) return cmd_grid(lambdas, seeds, offset);
    if (*particle) return cmd_particle(ops, checkpoints, seeds, offset, heatmaps);
    if (*report) {
      print_report(summarize_dir(dir), std::cout);
      return 0;
    }
  } catch (const ValidationError& e) {
    std::cerr << "invalid config:\n";
    for (const auto& v : e.violations()) std::cerr << "  " << v << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
