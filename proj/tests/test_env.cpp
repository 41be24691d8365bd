#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bee/env/grid_maze.hpp"
#include "bee/env/noisy.hpp"
#include "bee/env/particle_hole.hpp"
#include "bee/env/particle_oracle.hpp"
#include "bee/env/point_mass.hpp"
#include "bee/errors.hpp"

using namespace bee;
using namespace bee::env;

TEST_CASE("defaults") {
  const auto p = EnvSpec::particle_hole_default();
  CHECK(p.observation_low == std::vector<double>{0.0, 0.0});
  CHECK(p.observation_high == std::vector<double>{10.0, 10.0});
  CHECK(p.particle.hole_x == 10.0);
  CHECK(p.particle.hole_y == 5.0);
  CHECK(p.particle.hole_radius == 0.1);
  CHECK(p.particle.move_length == 0.1);

  const auto g = EnvSpec::grid_maze_default();
  CHECK(g.action_space.n == 4);
  GridMaze maze(g, 1);
  CHECK(maze.layout().rows == 8);
  CHECK(maze.layout().cols == 8);
  CHECK(maze.layout().start_row == 7);
  CHECK(maze.layout().goal_row == 0);
  CHECK(maze.layout().goal_col == 0);
  CHECK(MazeLayout::load(std::string(BEE_DATA_DIR) + "/maze_8x8.txt").cells == maze.layout().cells);
}

TEST_CASE("point mass sparse reward is the goal-disc indicator") {
  auto spec = EnvSpec::point_mass_default(RewardMode::sparse);
  PointMass pm(spec, 3);
  CHECK(pm.reward_for_observation(std::vector<double>{0.05, 0.05, 0.0, 0.0}) == 1.0);
  CHECK(pm.reward_for_observation(std::vector<double>{0.1, 0.0, 0.0, 0.0}) == 1.0);
  CHECK(pm.reward_for_observation(std::vector<double>{0.1001, 0.0, 0.0, 0.0}) == 0.0);
  pm.reset();
  pm.set_state(std::vector<double>{0.12, 0.0, -1.0, 0.0});
  const auto r = pm.step({0.0, 0.0});
  CHECK(r.terminated);
  CHECK(r.success);
  CHECK(r.reward == 1.0);
}

TEST_CASE("point mass walls and dense reward") {
  auto spec = EnvSpec::point_mass_default(RewardMode::dense);
  PointMass pm(spec, 3);
  pm.reset();
  const double a = spec.point_mass.arena;
  pm.set_state(std::vector<double>{a - 0.001, 0.3, 2.0, 0.0});
  const auto r = pm.step({1.0, 0.0});
  CHECK(r.observation[0] == a);
  CHECK(r.observation[2] == 0.0);
  CHECK(r.reward == doctest::Approx(-std::hypot(a, r.observation[1])));
}

TEST_CASE("particle hole") {
  auto spec = EnvSpec::particle_hole_default();
  ParticleHole p(spec, 1);
  p.reset();
  p.set_state(std::vector<double>{5.0, 5.0});
  auto r = p.step({0.0});
  CHECK(r.observation[0] == doctest::Approx(5.1).epsilon(1e-12));
  CHECK(r.observation[1] == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(r.reward == 0.0);
  CHECK_FALSE(r.terminated);

  p.set_state(std::vector<double>{9.95, 5.0});
  r = p.step({0.0});  // clipped to x = 10, inside the hole
  CHECK(r.reward == 1.0);
  CHECK(r.terminated);
  CHECK_THROWS_AS(p.step({0.0}), StateError);
}

TEST_CASE("grid maze walls block movement") {
  GridMaze maze(EnvSpec::grid_maze_default(), 1);
  maze.reset();
  // (1,1) is a wall; from (1,0) moving right stays put
  maze.set_state(std::vector<double>{1.0, 0.0});
  const auto r = maze.step({double(kRight)});
  CHECK(r.observation == std::vector<double>{1.0, 0.0});
  CHECK(r.reward == 0.0);
  // entering the goal pays 1 and terminates
  maze.set_state(std::vector<double>{1.0, 0.0});
  const auto g = maze.step({double(kUp)});
  CHECK(g.reward == 1.0);
  CHECK(g.terminated);
}

TEST_CASE("horizon truncates") {
  auto spec = EnvSpec::point_mass_default();
  spec.horizon = 3;
  PointMass pm(spec, 1);
  pm.reset();
  pm.set_state(std::vector<double>{0.4, 0.4, 0.0, 0.0});
  CHECK_FALSE(pm.step({0.0, 0.0}).truncated);
  CHECK_FALSE(pm.step({0.0, 0.0}).truncated);
  CHECK(pm.step({0.0, 0.0}).truncated);
}

TEST_CASE("noisy action wrapper") {
  const auto spec = EnvSpec::point_mass_default();
  SUBCASE("sigma 0 leaves trajectories bitwise identical") {
    auto plain = make_env(spec, 11);
    auto wrapped = noisy_wrap(make_env(spec, 11), 0.0, 99);
    CHECK(plain->reset() == wrapped->reset());
    Rng rng(1);
    for (int t = 0; t < 50; ++t) {
      const double a0 = uniform(rng, -1, 1), a1 = uniform(rng, -1, 1);
      const auto x = plain->step({a0, a1}), y = wrapped->step({a0, a1});
      CHECK(x.observation == y.observation);
      CHECK(x.reward == y.reward);
    }
  }
  SUBCASE("sigma 0.1 perturbations have the right spread") {
    NoisyActionEnv e(make_env(spec, 1), 0.1, 5);
    e.reset();
    double s = 0.0, ss = 0.0;
    const int n = 100000;
    int count = 0;
    while (count < n) {
      const auto r = e.step({0.0, 0.0});
      for (double z : e.last_noise()) {
        s += z;
        ss += z * z;
        ++count;
      }
      if (r.terminated || r.truncated) e.reset();
    }
    const double mean = s / count;
    const double sd = std::sqrt(ss / count - mean * mean);
    CHECK(sd >= 0.095);
    CHECK(sd <= 0.105);
  }
  SUBCASE("sigma 0.2 may leave the box before clipping, never after") {
    NoisyActionEnv e(make_env(spec, 1), 0.2, 5);
    e.reset();
    bool exceeded = false;
    for (int t = 0; t < 500; ++t) {
      const auto r = e.step({0.95, -0.95});
      if (std::abs(0.95 + e.last_noise()[0]) > 1.0) {
        exceeded = true;
        CHECK(r.action_clipped);
      }
      if (r.terminated || r.truncated) e.reset();
    }
    CHECK(exceeded);
  }
}

TEST_CASE("particle oracle") {
  // At resolution 55 the cell centre (9.909, 5.0) lies inside the hole disc.
  const auto o = particle_oracle_q(55, 0.99);
  const auto v = o.cell_values();
  const auto& g = o.grid;
  int hole = -1;
  for (int c = 0; c < g.n_cells(); ++c)
    if (g.hole_cell(c)) hole = c;
  REQUIRE(hole >= 0);
  CHECK(v[hole] == doctest::Approx(1.0));
  // along the hole's row, value never increases moving away from it
  const int row = g.row(hole);
  for (int col = g.resolution - 2; col >= 0; --col)
    CHECK(v[row * g.resolution + col] <= v[row * g.resolution + col + 1] + 1e-12);
  // shortest-path discounting: a centre at distance d needs about d / 0.1 moves
  for (int col = g.resolution - 2; col >= g.resolution - 11; --col) {
    const int c = row * g.resolution + col;
    const double d = std::hypot(g.center_x(c) - g.params.hole_x, g.center_y(c) - g.params.hole_y);
    CHECK(std::abs(v[c] - std::pow(0.99, std::ceil(d / 0.1))) <= 0.02);
  }
}
