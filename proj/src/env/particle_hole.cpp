#include "bee/env/particle_hole.hpp"

#include <algorithm>
#include <cmath>

#include "bee/errors.hpp"

namespace bee::env {

ParticleHole::ParticleHole(EnvSpec spec, std::uint64_t seed) : spec_(std::move(spec)), rng_(seed) {
  if (spec_.action_space.dim() != 1 || !spec_.action_space.is_box())
    throw ArgumentError("particle_hole takes a single angle action");
}

bool ParticleHole::in_hole(double x, double y) const {
  const auto& p = spec_.particle;
  return std::hypot(x - p.hole_x, y - p.hole_y) <= p.hole_radius;
}

std::vector<double> ParticleHole::reset() {
  const auto& p = spec_.particle;
  do {
    x_ = uniform(rng_, p.spawn_x_low, p.spawn_x_high);
    y_ = uniform(rng_, p.spawn_y_low, p.spawn_y_high);
  } while (in_hole(x_, y_));
  elapsed_ = 0;
  done_ = false;
  return state();
}

StepResult ParticleHole::step(std::span<const double> action) {
  begin_step();
  if (action.size() != 1) throw ArgumentError("particle_hole expects one angle");
  StepResult out;
  std::vector<double> a(action.begin(), action.end());
  out.action_clipped = clip_to_box(a, spec_.action_space);
  const auto& p = spec_.particle;
  x_ = std::clamp(x_ + p.move_length * std::cos(a[0]), 0.0, p.size);
  y_ = std::clamp(y_ + p.move_length * std::sin(a[0]), 0.0, p.size);
  out.observation = state();
  out.success = in_hole(x_, y_);
  out.terminated = out.success;
  out.reward = out.success ? 1.0 : 0.0;
  finish_step(out);
  return out;
}

void ParticleHole::set_state(std::span<const double> s) {
  if (s.size() != 2) throw ArgumentError("particle state is (x, y)");
  x_ = std::clamp(s[0], 0.0, spec_.particle.size);
  y_ = std::clamp(s[1], 0.0, spec_.particle.size);
  elapsed_ = 0;
  done_ = false;
}

bool ParticleHole::is_terminal_observation(std::span<const double> obs) const { return in_hole(obs[0], obs[1]); }

double ParticleHole::reward_for_observation(std::span<const double> obs) const {
  return in_hole(obs[0], obs[1]) ? 1.0 : 0.0;
}

}  // namespace bee::env
