#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bee/env/particle_oracle.hpp"
#include "bee/harness/heatmap.hpp"
#include "bee/mdp/tabular_mdp.hpp"
#include "bee/replay/replay_buffer.hpp"

namespace bee::harness {

/**
 * Offline Q iteration on a fixed random-walk buffer. Transitions are binned
 * onto the particle grid (cells x heading bins) to form an empirical model
 * over the observed pairs; each iteration is one sweep over those pairs.
 *   standard: r + gamma E_{s'} E_{a'~pi} Q(s', a')
 *   bee:      lambda (r + gamma E_{s'} max_{a' in buffer} Q) + (1 - lambda) standard
 * pi is the Boltzmann policy of the current Q over all heading bins.
 */
struct ParticleCompareConfig {
  std::vector<std::string> operators{"bee", "standard"};
  std::vector<int> checkpoints{100, 200, 500};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  int resolution = 20;
  double gamma = 0.99;
  int transitions = 100000;
  double spawn_x_low = 7.0;  ///< random-walk starts in [spawn_x_low, 10] x [0, 10]
  double lambda = 0.5;
  double temperature = 0.05;
  std::string heatmap_dir;   ///< empty: no files
};

struct ParticleCheckpoint {
  std::string op;
  int iteration = 0;
  double mae = 0.0;
  Grid2d values;  ///< resolution x resolution, row 0 = top of the box
};

struct ParticleRun {
  std::uint64_t seed = 0;
  int successes = 0;
  std::vector<ParticleCheckpoint> checkpoints;

  double mae(const std::string& op, int iteration) const;
};

struct ParticleCompareResult {
  Grid2d oracle;
  std::vector<ParticleRun> runs;
};

/// Random-walk transitions from the particle task with the configured spawn strip.
replay::ReplayBuffer random_walk_buffer(const ParticleCompareConfig& cfg, std::uint64_t seed);

/// Per-cell max over heading bins, laid out as an image (top row = largest y).
Grid2d cell_grid(const env::ParticleGrid& grid, const mdp::QTable& q);

ParticleRun particle_run(const ParticleCompareConfig& cfg, const env::ParticleOracle& oracle, std::uint64_t seed);
ParticleCompareResult particle_compare(const ParticleCompareConfig& cfg);

}  // namespace bee::harness
