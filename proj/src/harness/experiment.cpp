#include "bee/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <Eigen/Core>

#include "bee/diag/estimation.hpp"
#include "bee/diag/monte_carlo.hpp"
#include "bee/env/noisy.hpp"
#include "bee/errors.hpp"
#include "bee/harness/csv.hpp"
#include "bee/harness/grid_compare.hpp"
#include "bee/harness/particle_compare.hpp"
#include "bee/harness/scenario.hpp"
#include "bee/mb/mb_bac.hpp"

namespace bee::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::unique_ptr<env::Environment> diag_env(const ExperimentConfig& cfg, std::uint64_t seed) {
  auto e = env::make_env(cfg.env, seed);
  if (cfg.noise_sigma > 0.0) e = env::noisy_wrap(std::move(e), cfg.noise_sigma, derive_seed(seed, 7));
  return e;
}

void copy_update_columns(diag::RunRecord& row, const diag::RunRecord& last) {
  row.lambda_used = last.lambda_used;
  row.alpha = last.alpha;
  row.loss_q = last.loss_q;
  row.loss_v = last.loss_v;
  row.loss_pi = last.loss_pi;
}

SeedOutcome run_bac_seed(const ExperimentConfig& cfg, std::uint64_t seed, const std::string& dir) {
  SeedOutcome out;
  out.seed = seed;
  out.csv = "seed_" + std::to_string(seed) + ".csv";
  CsvWriter csv((fs::path(dir) / out.csv).string());
  agent::BacTrainer tr(cfg.agent, cfg.env, seed, cfg.noise_sigma);
  const std::uint64_t reinit_seed = derive_seed(seed, 999);

  auto apply = [&](long step) {
    const auto o = scenario_apply(cfg.scenario, tr.agent(), tr.buffer(), step, reinit_seed);
    out.injected += o.injected;
  };

  diag::RunRecord last;
  long eval_index = 0;
  try {
    apply(0);
    for (long step = 1; step <= cfg.run.total_steps; ++step) {
      last = tr.iterate();
      apply(step);
      if (step % cfg.run.eval_every == 0) {
        auto row = evaluation_row(cfg, tr.agent(), tr.buffer(), step, seed, eval_index++);
        copy_update_columns(row, last);
        csv.write(row);
        ++out.rows;
      }
    }
  } catch (const NumericError& e) {
    out.status = "numeric_error";
    out.error = e.what();
  }
  return out;
}

SeedOutcome run_mb_seed(const ExperimentConfig& cfg, std::uint64_t seed, const std::string& dir) {
  SeedOutcome out;
  out.seed = seed;
  out.csv = "seed_" + std::to_string(seed) + ".csv";
  CsvWriter csv((fs::path(dir) / out.csv).string());
  mb::MbBac run(cfg.agent, cfg.mb, cfg.env, seed);
  const long per_epoch = cfg.mb.steps_per_epoch;
  const long epochs = std::max<long>(1, cfg.run.total_steps / per_epoch);
  long eval_index = 0;
  try {
    for (long e = 1; e <= epochs; ++e) {
      const auto rec = run.epoch();
      const long step = e * per_epoch;
      // An epoch may jump over several multiples of eval_every; one row covers them.
      if (step / cfg.run.eval_every > (step - per_epoch) / cfg.run.eval_every || e == epochs) {
        auto row = evaluation_row(cfg, run.agent(), run.real_buffer(), step, seed, eval_index++);
        copy_update_columns(row, rec);
        csv.write(row);
        ++out.rows;
      }
    }
  } catch (const NumericError& e) {
    out.status = "numeric_error";
    out.error = e.what();
  }
  return out;
}

void write_manifest(const ExperimentConfig& cfg, const RunOptions& opts, ExperimentResult& res, double wall,
                    const json& extra) {
  json seeds = json::array();
  for (const auto& s : res.seeds) {
    json e = {{"seed", s.seed},       {"csv", s.csv},           {"status", s.status},
              {"injected", s.injected}, {"rows", s.rows}, {"wall_time_s", s.wall_time_s}};
    if (!s.error.empty()) e["error"] = s.error;
    seeds.push_back(e);
  }
  json m = {{"config_hash", config_hash(cfg)},
            {"config", to_json(cfg)},
            {"seed_offset", opts.seed_offset},
            {"versions",
             {{"beelab", kVersion},
              {"csv_schema", kCsvSchemaVersion},
              {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                            std::to_string(EIGEN_MINOR_VERSION)},
              {"compiler", __VERSION__}}},
            {"seeds", seeds},
            {"wall_time_s", wall},
            {"exit_code", res.exit_code}};
  if (!extra.is_null()) m["results"] = extra;
  res.manifest = (fs::path(res.output_dir) / "manifest.json").string();
  std::ofstream f(res.manifest, std::ios::trunc);
  f << m.dump(2) << '\n';
}

json run_grid_comparison(const ExperimentConfig& cfg, const std::vector<std::uint64_t>& seeds, const std::string& dir) {
  GridCompareConfig g;
  g.lambdas = cfg.scenario.lambdas;
  g.seeds = seeds;
  g.layout = cfg.env.kind == env::EnvKind::grid_maze ? cfg.env.grid.layout : "";
  g.gamma = cfg.env.kind == env::EnvKind::grid_maze ? cfg.env.grid.gamma : g.gamma;
  const auto r = grid_compare(g);
  std::ofstream f(fs::path(dir) / "grid_compare.csv", std::ios::trunc);
  f << "lambda,seed,rounds,sweeps_to_optimal,unvisited_free_cells\n";
  for (const auto& run : r.runs)
    f << run.lambda << ',' << run.seed << ',' << run.rounds << ',' << run.sweeps_to_optimal << ','
      << run.unvisited_free_cells << '\n';
  return {{"optimal_path_length", r.optimal_path_length}, {"free_cells", r.free_cells}, {"csv", "grid_compare.csv"}};
}

json run_particle_comparison(const ExperimentConfig& cfg, const std::vector<std::uint64_t>& seeds,
                             const std::string& dir) {
  ParticleCompareConfig p;
  p.operators = cfg.scenario.operators;
  p.checkpoints = cfg.scenario.checkpoints;
  p.seeds = seeds;
  p.heatmap_dir = (fs::path(dir) / "heatmaps").string();
  fs::create_directories(p.heatmap_dir);
  const auto r = particle_compare(p);
  std::ofstream f(fs::path(dir) / "particle_compare.csv", std::ios::trunc);
  f << "seed,successes,operator,iteration,mae\n";
  for (const auto& run : r.runs)
    for (const auto& c : run.checkpoints)
      f << run.seed << ',' << run.successes << ',' << c.op << ',' << c.iteration << ',' << c.mae << '\n';
  return {{"csv", "particle_compare.csv"}, {"heatmaps", "heatmaps"}};
}

}  // namespace

std::string resolve_output_dir(const ExperimentConfig& cfg, const RunOptions& opts) {
  std::string root = opts.output_root;
  if (root.empty())
    if (const char* env = std::getenv(kOutputRootEnv)) root = env;
  fs::path p(cfg.output_dir);
  if (!root.empty() && p.is_relative()) p = fs::path(root) / p;
  return p.string();
}

diag::RunRecord evaluation_row(const ExperimentConfig& cfg, const agent::BacAgent& agent,
                               const replay::ReplayBuffer& buffer, long step, std::uint64_t run_seed,
                               std::uint64_t eval_index) {
  diag::RunRecord row;
  row.step = step;
  row.seed = static_cast<long>(run_seed);
  const auto ev = agent::evaluate_agent(agent, cfg.env, derive_seed(run_seed, 1000 + eval_index), cfg.run.eval_episodes,
                                        cfg.noise_sigma);
  row.episode_return = ev.mean_return;
  row.success = ev.success_rate;

  const std::uint64_t diag_seed = derive_seed(run_seed, 3000 + eval_index);
  Rng rng(diag_seed);
  if (cfg.run.mc_rollouts > 0) {
    auto e = diag_env(cfg, derive_seed(diag_seed, 1));
    const int n = cfg.run.mc_states;
    const int obs_dim = cfg.env.observation_dim, act_dim = cfg.env.action_space.dim();
    nn::Matrix states(obs_dim, n), actions(act_dim, n);
    std::vector<diag::StateAction> pairs;
    for (int i = 0; i < n; ++i) {
      const auto s = e->reset();
      const auto a = agent.act(s, rng, false);
      for (int k = 0; k < obs_dim; ++k) states(k, i) = s[k];
      for (int k = 0; k < act_dim; ++k) actions(k, i) = a[k];
      pairs.push_back({s, agent::scale_action(a, cfg.env.action_space)});
    }
    const auto mc = diag::monte_carlo_q(*e, diag::agent_policy(agent, cfg.env.action_space, false), pairs,
                                        cfg.run.mc_rollouts, cfg.agent.gamma, cfg.env.horizon, derive_seed(diag_seed, 2));
    double mc_mean = 0.0;
    for (double x : mc) mc_mean += x;
    row.q_learned_mean = agent.q_value(states, actions).mean();
    row.q_mc_mean = mc_mean / n;
    row.fill_gap();
  }
  if (cfg.run.delta_batch > 0 && !buffer.empty()) row.delta_mu_pi = diag::delta_mu_pi(agent, buffer, cfg.run.delta_batch, rng);
  return row;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  const auto t0 = Clock::now();
  ExperimentResult res;
  res.output_dir = resolve_output_dir(cfg, opts);
  fs::create_directories(res.output_dir);

  std::vector<std::uint64_t> seeds;
  for (auto s : cfg.run.seeds) seeds.push_back(s + opts.seed_offset);

  json extra;
  if (cfg.scenario.kind == ScenarioKind::operator_comparison_grid) {
    extra = run_grid_comparison(cfg, seeds, res.output_dir);
  } else if (cfg.scenario.kind == ScenarioKind::operator_comparison_particle) {
    extra = run_particle_comparison(cfg, seeds, res.output_dir);
  } else {
    res.seeds.resize(seeds.size());
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    auto worker = [&] {
      for (std::size_t i; (i = next++) < seeds.size();) {
        const auto ts = Clock::now();
        SeedOutcome o = cfg.agent_kind == AgentKind::bac ? run_bac_seed(cfg, seeds[i], res.output_dir)
                                                         : run_mb_seed(cfg, seeds[i], res.output_dir);
        o.wall_time_s = seconds_since(ts);
        if (!opts.quiet) {
          std::lock_guard lock(log_mutex);
          std::cerr << "seed " << o.seed << ": " << o.status << " (" << o.rows << " rows, " << o.wall_time_s << " s)";
          if (!o.error.empty()) std::cerr << " " << o.error;
          std::cerr << '\n';
        }
        res.seeds[i] = std::move(o);
      }
    };
    const int n_workers = std::min<int>(cfg.run.workers, static_cast<int>(seeds.size()));
    if (n_workers <= 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    }
    for (const auto& s : res.seeds)
      if (s.status != "ok") res.exit_code = 2;
  }
  write_manifest(cfg, opts, res, seconds_since(t0), extra);
  return res;
}

}  // namespace bee::harness
