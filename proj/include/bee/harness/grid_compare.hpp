#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bee/mdp/tabular_mdp.hpp"

namespace bee::harness {

/**
 * Online tabular learning on the grid maze. Each round runs one episode with
 * a Boltzmann behaviour policy on the current Q, adds every visited (s, a) to
 * the empirical support, then applies one BEE sweep restricted to that
 * support. The same Boltzmann policy is the explore operator's pi.
 */
struct GridCompareConfig {
  std::vector<double> lambdas{0.0, 0.5, 1.0};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::string layout;               ///< empty: built-in map
  double gamma = 0.95;
  int max_rounds = 1000;
  int episode_horizon = 100;
  double temperature = 0.2;
  double exploration_weight = 0.05;  ///< alpha in omega = alpha log pi
};

struct GridRun {
  double lambda = 0.0;
  std::uint64_t seed = 0;
  int rounds = 0;
  /// Sweeps until the greedy rollout from the start follows a shortest path; -1 if never.
  int sweeps_to_optimal = -1;
  int unvisited_free_cells = 0;
  mdp::QTable q;
  mdp::SupportMask visited;
};

struct GridCompareResult {
  std::vector<GridRun> runs;
  int optimal_path_length = 0;
  int free_cells = 0;

  const GridRun& find(double lambda, std::uint64_t seed) const;
};

GridRun grid_run(const GridCompareConfig& cfg, double lambda, std::uint64_t seed);
GridCompareResult grid_compare(const GridCompareConfig& cfg);

/// Shortest start-to-goal path length (breadth-first search over free cells).
int maze_shortest_path(const std::string& layout);

}  // namespace bee::harness
