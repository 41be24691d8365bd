#include "bee/env/environment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bee/env/grid_maze.hpp"
#include "bee/env/particle_hole.hpp"
#include "bee/env/point_mass.hpp"
#include "bee/errors.hpp"

namespace bee::env {

ActionSpace ActionSpace::discrete(int n) {
  ActionSpace s;
  s.kind = Kind::discrete;
  s.n = n;
  return s;
}

ActionSpace ActionSpace::box(std::vector<double> low, std::vector<double> high) {
  ActionSpace s;
  s.kind = Kind::box;
  s.low = std::move(low);
  s.high = std::move(high);
  return s;
}

EnvSpec EnvSpec::grid_maze_default() {
  EnvSpec s;
  s.kind = EnvKind::grid_maze;
  s.horizon = 100;
  s.reward_mode = RewardMode::sparse;
  s.action_space = ActionSpace::discrete(4);
  s.observation_dim = 2;
  s.observation_low = {0.0, 0.0};
  s.observation_high = {7.0, 7.0};
  return s;
}

EnvSpec EnvSpec::particle_hole_default() {
  EnvSpec s;
  s.kind = EnvKind::particle_hole;
  s.horizon = 200;
  s.reward_mode = RewardMode::sparse;
  s.action_space = ActionSpace::box({-std::numbers::pi}, {std::numbers::pi});
  s.observation_dim = 2;
  s.observation_low = {0.0, 0.0};
  s.observation_high = {s.particle.size, s.particle.size};
  return s;
}

EnvSpec EnvSpec::point_mass_default(RewardMode mode) {
  EnvSpec s;
  s.kind = EnvKind::point_mass;
  s.horizon = 200;
  s.reward_mode = mode;
  s.action_space = ActionSpace::box({-1.0, -1.0}, {1.0, 1.0});
  s.observation_dim = 4;
  const double a = s.point_mass.arena;
  const double v = s.point_mass.max_speed;
  s.observation_low = {-a, -a, -v, -v};
  s.observation_high = {a, a, v, v};
  return s;
}

void EnvSpec::validate() const {
  if (horizon < 1) throw ArgumentError("horizon must be >= 1");
  if (observation_dim < 1) throw ArgumentError("observation_dim must be positive");
  if (action_space.is_box()) {
    if (action_space.low.empty() || action_space.low.size() != action_space.high.size())
      throw ArgumentError("box action bounds malformed");
    for (std::size_t i = 0; i < action_space.low.size(); ++i)
      if (!(action_space.low[i] < action_space.high[i])) throw ArgumentError("box bounds need low < high");
  } else if (action_space.n < 1) {
    throw ArgumentError("discrete action space needs n >= 1");
  }
}

void Environment::begin_step() {
  if (done_) throw StateError("step() called on a finished episode; call reset() first");
}

void Environment::finish_step(StepResult& result) {
  ++elapsed_;
  if (!result.terminated && elapsed_ >= spec().horizon) result.truncated = true;
  done_ = result.terminated || result.truncated;
}

std::unique_ptr<Environment> make_env(const EnvSpec& spec, std::uint64_t seed) {
  spec.validate();
  switch (spec.kind) {
    case EnvKind::grid_maze:
      return std::make_unique<GridMaze>(spec, seed);
    case EnvKind::particle_hole:
      return std::make_unique<ParticleHole>(spec, seed);
    case EnvKind::point_mass:
      return std::make_unique<PointMass>(spec, seed);
  }
  throw ArgumentError("unknown environment kind");
}

bool clip_to_box(std::vector<double>& action, const ActionSpace& space) {
  bool clipped = false;
  for (std::size_t i = 0; i < action.size(); ++i) {
    const double c = std::clamp(action[i], space.low[i], space.high[i]);
    if (c != action[i]) clipped = true;
    action[i] = c;
  }
  return clipped;
}

std::string to_string(EnvKind kind) {
  switch (kind) {
    case EnvKind::grid_maze: return "grid_maze";
    case EnvKind::particle_hole: return "particle_hole";
    case EnvKind::point_mass: return "point_mass";
  }
  return "?";
}

EnvKind env_kind_from_string(const std::string& s) {
  if (s == "grid_maze") return EnvKind::grid_maze;
  if (s == "particle_hole") return EnvKind::particle_hole;
  if (s == "point_mass") return EnvKind::point_mass;
  throw ArgumentError("unknown environment kind '" + s + "'");
}

std::string to_string(RewardMode mode) { return mode == RewardMode::dense ? "dense" : "sparse"; }

RewardMode reward_mode_from_string(const std::string& s) {
  if (s == "dense") return RewardMode::dense;
  if (s == "sparse") return RewardMode::sparse;
  throw ArgumentError("unknown reward mode '" + s + "'");
}

}  // namespace bee::env
