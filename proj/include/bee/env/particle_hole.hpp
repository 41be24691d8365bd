#pragma once

#include "bee/env/environment.hpp"

namespace bee::env {

/**
 * Random-walk particle in [0,size]^2. The action is a heading angle; every
 * step moves exactly `move_length` along it (then clips to the box).
 * Reward 1 and termination iff the particle lands within `hole_radius` of
 * the hole centre.
 */
class ParticleHole final : public Environment {
 public:
  ParticleHole(EnvSpec spec, std::uint64_t seed);

  const EnvSpec& spec() const override { return spec_; }
  std::vector<double> reset() override;
  StepResult step(std::span<const double> action) override;
  using Environment::step;
  std::vector<double> state() const override { return {x_, y_}; }
  void set_state(std::span<const double> state) override;
  bool is_terminal_observation(std::span<const double> obs) const override;
  double reward_for_observation(std::span<const double> obs) const override;
  std::unique_ptr<Environment> clone() const override { return std::make_unique<ParticleHole>(*this); }

  bool in_hole(double x, double y) const;

 private:
  EnvSpec spec_;
  Rng rng_;
  double x_ = 0.0, y_ = 0.0;
};

}  // namespace bee::env
