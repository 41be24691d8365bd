#include "bee/harness/grid_compare.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "bee/env/grid_maze.hpp"
#include "bee/errors.hpp"
#include "bee/mdp/solvers.hpp"
#include "bee/tabular/bee_operator.hpp"

namespace bee::harness {
namespace {

env::EnvSpec maze_spec(const GridCompareConfig& cfg) {
  auto spec = env::EnvSpec::grid_maze_default();
  spec.grid.layout = cfg.layout;
  spec.grid.gamma = cfg.gamma;
  spec.horizon = cfg.episode_horizon;
  return spec;
}

mdp::TabularPolicy boltzmann(const mdp::QTable& q, double temperature) {
  mdp::TabularPolicy pi(q.n_states(), q.n_actions());
  for (int s = 0; s < q.n_states(); ++s) {
    double top = q(s, 0);
    for (int a = 1; a < q.n_actions(); ++a) top = std::max(top, q(s, a));
    double z = 0.0;
    for (int a = 0; a < q.n_actions(); ++a) z += std::exp((q(s, a) - top) / temperature);
    for (int a = 0; a < q.n_actions(); ++a) pi(s, a) = std::exp((q(s, a) - top) / temperature) / z;
  }
  return pi;
}

int sample_action(const mdp::TabularPolicy& pi, int s, Rng& rng) {
  const double u = uniform(rng);
  double acc = 0.0;
  for (int a = 0; a < pi.n_actions(); ++a) {
    acc += pi(s, a);
    if (u < acc) return a;
  }
  return pi.n_actions() - 1;
}

/// Steps the greedy policy needs from the start, or -1 if it never arrives.
int greedy_path_length(const env::GridMaze& maze, const mdp::QTable& q) {
  const auto& L = maze.layout();
  const auto greedy = mdp::greedy_policy(q);
  int r = L.start_row, c = L.start_col;
  for (int t = 1; t <= L.n_cells(); ++t) {
    int a = 0;
    for (int b = 0; b < 4; ++b)
      if (greedy(L.index(r, c), b) > 0.0) {
        a = b;
        break;
      }
    std::tie(r, c) = maze.move(r, c, a);
    if (r == L.goal_row && c == L.goal_col) return t;
  }
  return -1;
}

}  // namespace

const GridRun& GridCompareResult::find(double lambda, std::uint64_t seed) const {
  for (const auto& r : runs)
    if (r.lambda == lambda && r.seed == seed) return r;
  throw ArgumentError("no grid run for that lambda and seed");
}

int maze_shortest_path(const std::string& layout) {
  const auto L = env::MazeLayout::parse(layout.empty() ? env::kDefaultMaze : layout);
  std::vector<int> dist(L.n_cells(), -1);
  std::queue<std::pair<int, int>> frontier;
  dist[L.index(L.start_row, L.start_col)] = 0;
  frontier.push({L.start_row, L.start_col});
  const int dr[4] = {-1, 0, 1, 0}, dc[4] = {0, 1, 0, -1};
  while (!frontier.empty()) {
    auto [r, c] = frontier.front();
    frontier.pop();
    for (int k = 0; k < 4; ++k) {
      const int nr = r + dr[k], nc = c + dc[k];
      if (nr < 0 || nc < 0 || nr >= L.rows || nc >= L.cols || L.wall(nr, nc)) continue;
      if (dist[L.index(nr, nc)] >= 0) continue;
      dist[L.index(nr, nc)] = dist[L.index(r, c)] + 1;
      frontier.push({nr, nc});
    }
  }
  return dist[L.index(L.goal_row, L.goal_col)];
}

GridRun grid_run(const GridCompareConfig& cfg, double lambda, std::uint64_t seed) {
  const auto spec = maze_spec(cfg);
  env::GridMaze maze(spec, seed);
  const auto model = maze.to_mdp();
  const auto& L = maze.layout();
  const int optimal = maze_shortest_path(cfg.layout);
  Rng rng(derive_seed(seed, 0));

  GridRun run;
  run.lambda = lambda;
  run.seed = seed;
  run.q = mdp::QTable(model.n_states(), model.n_actions());
  run.visited = mdp::SupportMask(model.n_states(), model.n_actions());
  std::vector<bool> seen(L.n_cells(), false);
  seen[L.index(L.start_row, L.start_col)] = true;

  tabular::BlendConfig blend{lambda, cfg.exploration_weight};
  tabular::BackupOptions opts{tabular::EmptySupportRule::fall_back_to_explore, &run.visited};

  for (int round = 0; round < cfg.max_rounds; ++round) {
    const auto pi = boltzmann(run.q, cfg.temperature);
    auto obs = maze.reset();
    for (int t = 0; t < cfg.episode_horizon; ++t) {
      const int s = maze.state_index();
      const int a = sample_action(pi, s, rng);
      run.visited.set(s, a);
      const auto res = maze.step({static_cast<double>(a)});
      seen[maze.state_index()] = true;
      if (res.terminated || res.truncated) break;
    }
    run.q = tabular::bee_backup(model, run.q, run.visited, pi, blend, opts);
    run.rounds = round + 1;
    if (greedy_path_length(maze, run.q) == optimal) {
      run.sweeps_to_optimal = run.rounds;
      break;
    }
  }
  for (int r = 0; r < L.rows; ++r)
    for (int c = 0; c < L.cols; ++c)
      if (!L.wall(r, c) && !seen[L.index(r, c)]) ++run.unvisited_free_cells;
  return run;
}

GridCompareResult grid_compare(const GridCompareConfig& cfg) {
  GridCompareResult res;
  res.optimal_path_length = maze_shortest_path(cfg.layout);
  res.free_cells = env::MazeLayout::parse(cfg.layout.empty() ? env::kDefaultMaze : cfg.layout).free_cells();
  for (double lam : cfg.lambdas)
    for (auto seed : cfg.seeds) res.runs.push_back(grid_run(cfg, lam, seed));
  return res;
}

}  // namespace bee::harness
