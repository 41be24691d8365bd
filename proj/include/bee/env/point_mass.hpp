#pragma once

#include "bee/env/environment.hpp"

namespace bee::env {

/**
 * 2-D double integrator with linear friction. State (px, py, vx, vy);
 * action is a force in [-1,1]^2. Hitting a wall zeroes that velocity
 * component. Reaching the goal disc terminates the episode in both reward
 * modes: dense pays -||pos - goal|| per step, sparse pays 1 on arrival.
 */
class PointMass final : public Environment {
 public:
  PointMass(EnvSpec spec, std::uint64_t seed);

  const EnvSpec& spec() const override { return spec_; }
  std::vector<double> reset() override;
  StepResult step(std::span<const double> action) override;
  using Environment::step;
  std::vector<double> state() const override { return {px_, py_, vx_, vy_}; }
  void set_state(std::span<const double> state) override;
  bool is_terminal_observation(std::span<const double> obs) const override;
  double reward_for_observation(std::span<const double> obs) const override;
  std::unique_ptr<Environment> clone() const override { return std::make_unique<PointMass>(*this); }

  double goal_distance(double x, double y) const;

 private:
  EnvSpec spec_;
  Rng rng_;
  double px_ = 0.0, py_ = 0.0, vx_ = 0.0, vy_ = 0.0;
};

}  // namespace bee::env
