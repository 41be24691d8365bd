#pragma once

#include <vector>

#include "bee/env/environment.hpp"
#include "bee/mdp/tabular_mdp.hpp"

namespace bee::env {

inline constexpr int kParticleAngleBins = 16;

/// Cell and heading-bin bookkeeping for the discretized particle task.
struct ParticleGrid {
  int resolution = 0;
  int angle_bins = kParticleAngleBins;
  ParticleHoleParams params;

  double cell_size() const { return params.size / resolution; }
  int n_cells() const { return resolution * resolution; }
  /// Absorbing state entered after landing in the hole.
  int terminal_state() const { return n_cells(); }
  int n_states() const { return n_cells() + 1; }

  int cell_of(double x, double y) const;
  int column(int cell) const { return cell % resolution; }
  int row(int cell) const { return cell / resolution; }
  double center_x(int cell) const { return (column(cell) + 0.5) * cell_size(); }
  double center_y(int cell) const { return (row(cell) + 0.5) * cell_size(); }
  double bin_angle(int bin) const;
  int angle_bin(double theta) const;
  /// A cell whose centre lies inside the hole: reward 1, then absorbed.
  bool hole_cell(int cell) const;
};

struct ParticleOracle {
  ParticleGrid grid;
  mdp::TabularMdp mdp;
  mdp::QTable q;

  /// V*(cell) = max over heading bins.
  std::vector<double> cell_values() const;
};

/**
 * Discretize the particle task into resolution^2 cells and 16 heading bins.
 * Transitions average a lattice of start points inside each cell moved by
 * one step; landing inside the hole pays 1 and absorbs. Returns Q* from
 * value iteration.
 */
ParticleOracle particle_oracle_q(int resolution, double gamma, double tol = 1e-10,
                                 const ParticleHoleParams& params = {});

/// Only the MDP, for callers that need the model without solving it.
mdp::TabularMdp particle_mdp(const ParticleGrid& grid, double gamma);

}  // namespace bee::env
