#include "bee/env/point_mass.hpp"

#include <algorithm>
#include <cmath>

#include "bee/errors.hpp"

namespace bee::env {

PointMass::PointMass(EnvSpec spec, std::uint64_t seed) : spec_(std::move(spec)), rng_(seed) {
  if (spec_.action_space.dim() != 2 || !spec_.action_space.is_box())
    throw ArgumentError("point_mass takes a 2-D force");
}

double PointMass::goal_distance(double x, double y) const {
  return std::hypot(x - spec_.point_mass.goal_x, y - spec_.point_mass.goal_y);
}

std::vector<double> PointMass::reset() {
  const auto& p = spec_.point_mass;
  do {
    px_ = uniform(rng_, -p.arena, p.arena);
    py_ = uniform(rng_, -p.arena, p.arena);
  } while (goal_distance(px_, py_) < p.min_start_distance);
  vx_ = vy_ = 0.0;
  elapsed_ = 0;
  done_ = false;
  return state();
}

StepResult PointMass::step(std::span<const double> action) {
  begin_step();
  if (action.size() != 2) throw ArgumentError("point_mass expects a 2-D action");
  StepResult out;
  std::vector<double> a(action.begin(), action.end());
  out.action_clipped = clip_to_box(a, spec_.action_space);
  const auto& p = spec_.point_mass;

  vx_ = std::clamp(vx_ + p.dt * (a[0] - p.friction * vx_), -p.max_speed, p.max_speed);
  vy_ = std::clamp(vy_ + p.dt * (a[1] - p.friction * vy_), -p.max_speed, p.max_speed);
  px_ += p.dt * vx_;
  py_ += p.dt * vy_;
  if (std::abs(px_) > p.arena) {
    px_ = std::clamp(px_, -p.arena, p.arena);
    vx_ = 0.0;
  }
  if (std::abs(py_) > p.arena) {
    py_ = std::clamp(py_, -p.arena, p.arena);
    vy_ = 0.0;
  }

  out.observation = state();
  out.success = goal_distance(px_, py_) <= p.goal_radius;
  out.terminated = out.success;
  out.reward = reward_for_observation(out.observation);
  finish_step(out);
  return out;
}

void PointMass::set_state(std::span<const double> s) {
  if (s.size() != 4) throw ArgumentError("point_mass state is (px, py, vx, vy)");
  const auto& p = spec_.point_mass;
  px_ = std::clamp(s[0], -p.arena, p.arena);
  py_ = std::clamp(s[1], -p.arena, p.arena);
  vx_ = std::clamp(s[2], -p.max_speed, p.max_speed);
  vy_ = std::clamp(s[3], -p.max_speed, p.max_speed);
  elapsed_ = 0;
  done_ = false;
}

bool PointMass::is_terminal_observation(std::span<const double> obs) const {
  return goal_distance(obs[0], obs[1]) <= spec_.point_mass.goal_radius;
}

double PointMass::reward_for_observation(std::span<const double> obs) const {
  const double d = goal_distance(obs[0], obs[1]);
  if (spec_.reward_mode == RewardMode::sparse) return d <= spec_.point_mass.goal_radius ? 1.0 : 0.0;
  return -d;
}

}  // namespace bee::env
