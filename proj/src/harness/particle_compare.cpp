#include "bee/harness/particle_compare.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <numbers>

#include "bee/env/environment.hpp"
#include "bee/errors.hpp"
#include "bee/tabular/bee_operator.hpp"

namespace bee::harness {
namespace {

env::EnvSpec walk_spec(const ParticleCompareConfig& cfg) {
  auto spec = env::EnvSpec::particle_hole_default();
  spec.particle.spawn_x_low = cfg.spawn_x_low;
  return spec;
}

struct EmpiricalModel {
  mdp::TabularMdp mdp;
  mdp::SupportMask support;
};

EmpiricalModel empirical_model(const env::ParticleGrid& grid, const replay::ReplayBuffer& buffer, double gamma) {
  const int ns = grid.n_states();
  const int na = grid.angle_bins;
  std::vector<std::map<int, double>> counts(static_cast<std::size_t>(ns) * na);
  std::vector<double> reward(static_cast<std::size_t>(ns) * na, 0.0);
  for (int i = 0; i < buffer.size(); ++i) {
    const auto t = buffer.at(i);
    const int s = grid.cell_of(t.state[0], t.state[1]);
    const int a = grid.angle_bin(t.action[0]);
    const int next = t.terminated ? grid.terminal_state() : grid.cell_of(t.next_state[0], t.next_state[1]);
    const std::size_t k = static_cast<std::size_t>(s) * na + a;
    counts[k][next] += 1.0;
    reward[k] += t.reward;
  }
  EmpiricalModel m{mdp::TabularMdp(ns, na, gamma), mdp::SupportMask(ns, na)};
  m.mdp.make_terminal(grid.terminal_state());
  for (int s = 0; s < ns; ++s)
    for (int a = 0; a < na; ++a) {
      const auto& c = counts[static_cast<std::size_t>(s) * na + a];
      if (c.empty()) continue;
      double n = 0.0;
      for (const auto& [next, w] : c) n += w;
      std::vector<mdp::Outcome> row;
      double mass = 0.0;
      for (const auto& [next, w] : c) {
        row.push_back({next, w / n});
        mass += w / n;
      }
      row.back().prob += 1.0 - mass;  // absorb rounding so the row sums to one
      m.mdp.set_row(s, a, row, reward[static_cast<std::size_t>(s) * na + a] / n);
      m.support.set(s, a);
    }
  return m;
}

mdp::TabularPolicy boltzmann(const mdp::QTable& q, double temperature) {
  mdp::TabularPolicy pi(q.n_states(), q.n_actions());
  for (int s = 0; s < q.n_states(); ++s) {
    const auto row = q.row(s);
    const double top = *std::max_element(row.begin(), row.end());
    double z = 0.0;
    for (int a = 0; a < q.n_actions(); ++a) z += std::exp((q(s, a) - top) / temperature);
    for (int a = 0; a < q.n_actions(); ++a) pi(s, a) = std::exp((q(s, a) - top) / temperature) / z;
  }
  return pi;
}

double grid_mae(const Grid2d& a, const Grid2d& b) {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) {
      sum += std::abs(a[i][j] - b[i][j]);
      ++n;
    }
  return sum / static_cast<double>(n);
}

}  // namespace

double ParticleRun::mae(const std::string& op, int iteration) const {
  for (const auto& c : checkpoints)
    if (c.op == op && c.iteration == iteration) return c.mae;
  throw ArgumentError("no checkpoint for " + op + " at iteration " + std::to_string(iteration));
}

replay::ReplayBuffer random_walk_buffer(const ParticleCompareConfig& cfg, std::uint64_t seed) {
  auto e = env::make_env(walk_spec(cfg), derive_seed(seed, 1));
  Rng rng(derive_seed(seed, 2));
  replay::ReplayBuffer buffer(cfg.transitions, 2, 1);
  auto obs = e->reset();
  for (int i = 0; i < cfg.transitions; ++i) {
    const double theta = uniform(rng, -std::numbers::pi, std::numbers::pi);
    auto r = e->step({theta});
    buffer.push({obs, {theta}, r.reward, r.observation, r.terminated});
    obs = (r.terminated || r.truncated) ? e->reset() : r.observation;
  }
  return buffer;
}

Grid2d cell_grid(const env::ParticleGrid& grid, const mdp::QTable& q) {
  Grid2d g(grid.resolution, std::vector<double>(grid.resolution));
  for (int c = 0; c < grid.n_cells(); ++c) {
    const auto row = q.row(c);
    g[grid.resolution - 1 - grid.row(c)][grid.column(c)] = *std::max_element(row.begin(), row.end());
  }
  return g;
}

ParticleRun particle_run(const ParticleCompareConfig& cfg, const env::ParticleOracle& oracle, std::uint64_t seed) {
  const auto& grid = oracle.grid;
  const auto truth = cell_grid(grid, oracle.q);
  const auto buffer = random_walk_buffer(cfg, seed);
  const auto model = empirical_model(grid, buffer, cfg.gamma);

  ParticleRun run;
  run.seed = seed;
  for (int i = 0; i < buffer.size(); ++i) run.successes += buffer.at(i).reward > 0.0 ? 1 : 0;

  const int last = cfg.checkpoints.empty() ? 0 : *std::max_element(cfg.checkpoints.begin(), cfg.checkpoints.end());
  tabular::BackupOptions opts{tabular::EmptySupportRule::fall_back_to_explore, &model.support};
  for (const auto& op : cfg.operators) {
    double lambda = 0.0;
    if (op == "bee")
      lambda = cfg.lambda;
    else if (op != "standard")
      throw ArgumentError("unknown operator '" + op + "' (expected bee or standard)");
    const tabular::BlendConfig blend{lambda, 0.0};
    mdp::QTable q(grid.n_states(), grid.angle_bins);
    for (int it = 1; it <= last; ++it) {
      q = tabular::bee_backup(model.mdp, q, model.support, boltzmann(q, cfg.temperature), blend, opts);
      if (std::find(cfg.checkpoints.begin(), cfg.checkpoints.end(), it) == cfg.checkpoints.end()) continue;
      ParticleCheckpoint cp{op, it, 0.0, cell_grid(grid, q)};
      cp.mae = grid_mae(cp.values, truth);
      if (!cfg.heatmap_dir.empty()) {
        std::filesystem::create_directories(cfg.heatmap_dir);
        emit_heatmap(cp.values, (std::filesystem::path(cfg.heatmap_dir) /
                                 ("seed" + std::to_string(seed) + "_" + op + "_" + std::to_string(it)))
                                    .string());
      }
      run.checkpoints.push_back(std::move(cp));
    }
  }
  return run;
}

ParticleCompareResult particle_compare(const ParticleCompareConfig& cfg) {
  const auto oracle = env::particle_oracle_q(cfg.resolution, cfg.gamma);
  ParticleCompareResult res;
  res.oracle = cell_grid(oracle.grid, oracle.q);
  if (!cfg.heatmap_dir.empty()) {
    std::filesystem::create_directories(cfg.heatmap_dir);
    emit_heatmap(res.oracle, (std::filesystem::path(cfg.heatmap_dir) / "oracle").string());
  }
  for (auto seed : cfg.seeds) res.runs.push_back(particle_run(cfg, oracle, seed));
  return res;
}

}  // namespace bee::harness
