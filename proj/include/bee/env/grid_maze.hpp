#pragma once

#include <string>
#include <vector>

#include "bee/env/environment.hpp"
#include "bee/mdp/tabular_mdp.hpp"

namespace bee::env {

/// The built-in 8x8 map (also checked in as data/maze_8x8.txt).
extern const char* const kDefaultMaze;

/// Parsed maze text: '#' wall, '.' free, 'S' start, 'G' goal; one row per line.
struct MazeLayout {
  int rows = 0;
  int cols = 0;
  std::vector<std::string> cells;
  int start_row = -1, start_col = -1;
  int goal_row = -1, goal_col = -1;

  static MazeLayout parse(const std::string& text);
  static MazeLayout load(const std::string& path);

  bool wall(int r, int c) const { return cells[r][c] == '#'; }
  int index(int r, int c) const { return r * cols + c; }
  int n_cells() const { return rows * cols; }
  int free_cells() const;
};

enum GridAction : int { kUp = 0, kRight = 1, kDown = 2, kLeft = 3 };

/**
 * Deterministic 4-neighbour maze. Observation is (row, col); reward 1 on
 * entering the goal, which terminates the episode.
 */
class GridMaze final : public Environment {
 public:
  GridMaze(EnvSpec spec, std::uint64_t seed);

  const EnvSpec& spec() const override { return spec_; }
  std::vector<double> reset() override;
  StepResult step(std::span<const double> action) override;
  using Environment::step;
  std::vector<double> state() const override { return {double(row_), double(col_)}; }
  void set_state(std::span<const double> state) override;
  bool is_terminal_observation(std::span<const double> obs) const override;
  double reward_for_observation(std::span<const double> obs) const override;
  std::unique_ptr<Environment> clone() const override { return std::make_unique<GridMaze>(*this); }

  const MazeLayout& layout() const { return layout_; }
  int state_index() const { return layout_.index(row_, col_); }

  /// Exact MDP over all cells (walls become unreachable self-loops, the goal is terminal).
  mdp::TabularMdp to_mdp() const;
  /// Cell reached from (r, c) by action `a`.
  std::pair<int, int> move(int r, int c, int a) const;

 private:
  EnvSpec spec_;
  MazeLayout layout_;
  int row_ = 0, col_ = 0;
};

}  // namespace bee::env
