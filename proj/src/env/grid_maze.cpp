#include "bee/env/grid_maze.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "bee/errors.hpp"

namespace bee::env {

const char* const kDefaultMaze =
    "G...#...\n"
    ".##.#.#.\n"
    ".#..#.#.\n"
    ".#.##.#.\n"
    ".#......\n"
    ".####.#.\n"
    "......#.\n"
    ".#..S...\n";

MazeLayout MazeLayout::parse(const std::string& text) {
  MazeLayout m;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (m.cols == 0) m.cols = static_cast<int>(line.size());
    if (static_cast<int>(line.size()) != m.cols) throw ArgumentError("maze rows must have equal length");
    for (int c = 0; c < m.cols; ++c) {
      const char ch = line[c];
      if (ch == 'S') {
        if (m.start_row >= 0) throw ArgumentError("maze has more than one start");
        m.start_row = m.rows;
        m.start_col = c;
      } else if (ch == 'G') {
        if (m.goal_row >= 0) throw ArgumentError("maze has more than one goal");
        m.goal_row = m.rows;
        m.goal_col = c;
      } else if (ch != '#' && ch != '.') {
        throw ArgumentError(std::string("unexpected maze character '") + ch + "'");
      }
    }
    m.cells.push_back(line);
    ++m.rows;
  }
  if (m.rows == 0) throw ArgumentError("empty maze");
  if (m.start_row < 0 || m.goal_row < 0) throw ArgumentError("maze needs exactly one S and one G");
  return m;
}

MazeLayout MazeLayout::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ArgumentError("cannot open maze file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

int MazeLayout::free_cells() const {
  int n = 0;
  for (const auto& row : cells)
    for (char ch : row) n += ch != '#';
  return n;
}

GridMaze::GridMaze(EnvSpec spec, std::uint64_t /*seed*/)
    : spec_(std::move(spec)), layout_(MazeLayout::parse(spec_.grid.layout.empty() ? kDefaultMaze : spec_.grid.layout)) {
  spec_.observation_low = {0.0, 0.0};
  spec_.observation_high = {double(layout_.rows - 1), double(layout_.cols - 1)};
  row_ = layout_.start_row;
  col_ = layout_.start_col;
}

std::vector<double> GridMaze::reset() {
  row_ = layout_.start_row;
  col_ = layout_.start_col;
  elapsed_ = 0;
  done_ = false;
  return state();
}

std::pair<int, int> GridMaze::move(int r, int c, int a) const {
  static constexpr int dr[4] = {-1, 0, 1, 0};
  static constexpr int dc[4] = {0, 1, 0, -1};
  const int nr = r + dr[a];
  const int nc = c + dc[a];
  if (nr < 0 || nr >= layout_.rows || nc < 0 || nc >= layout_.cols || layout_.wall(nr, nc)) return {r, c};
  return {nr, nc};
}

StepResult GridMaze::step(std::span<const double> action) {
  begin_step();
  if (action.size() != 1) throw ArgumentError("grid maze expects a single action index");
  StepResult out;
  int a = static_cast<int>(std::lround(action[0]));
  if (a < 0 || a > 3) {
    a = std::clamp(a, 0, 3);
    out.action_clipped = true;
  }
  std::tie(row_, col_) = move(row_, col_, a);
  out.observation = state();
  out.success = row_ == layout_.goal_row && col_ == layout_.goal_col;
  out.terminated = out.success;
  out.reward = out.success ? 1.0 : 0.0;
  finish_step(out);
  return out;
}

void GridMaze::set_state(std::span<const double> s) {
  if (s.size() != 2) throw ArgumentError("grid state is (row, col)");
  const int r = static_cast<int>(std::lround(s[0]));
  const int c = static_cast<int>(std::lround(s[1]));
  if (r < 0 || r >= layout_.rows || c < 0 || c >= layout_.cols || layout_.wall(r, c))
    throw ArgumentError("grid state must be a free cell");
  row_ = r;
  col_ = c;
  elapsed_ = 0;
  done_ = false;
}

bool GridMaze::is_terminal_observation(std::span<const double> obs) const {
  return std::lround(obs[0]) == layout_.goal_row && std::lround(obs[1]) == layout_.goal_col;
}

double GridMaze::reward_for_observation(std::span<const double> obs) const {
  return is_terminal_observation(obs) ? 1.0 : 0.0;
}

mdp::TabularMdp GridMaze::to_mdp() const {
  mdp::TabularMdp m(layout_.n_cells(), 4, spec_.grid.gamma);
  for (int r = 0; r < layout_.rows; ++r)
    for (int c = 0; c < layout_.cols; ++c) {
      if (layout_.wall(r, c)) continue;
      if (r == layout_.goal_row && c == layout_.goal_col) {
        m.make_terminal(layout_.index(r, c));
        continue;
      }
      for (int a = 0; a < 4; ++a) {
        const auto [nr, nc] = move(r, c, a);
        const bool goal = nr == layout_.goal_row && nc == layout_.goal_col;
        m.set_row(layout_.index(r, c), a, {{layout_.index(nr, nc), 1.0}}, goal ? 1.0 : 0.0);
      }
    }
  return m;
}

}  // namespace bee::env
