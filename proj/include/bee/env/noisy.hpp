#pragma once

#include <memory>

#include "bee/env/environment.hpp"

namespace bee::env {

/// Executes a + N(0, σ²) per dimension; the inner environment clips as usual.
class NoisyActionEnv final : public Environment {
 public:
  NoisyActionEnv(std::unique_ptr<Environment> inner, double sigma, std::uint64_t seed);
  NoisyActionEnv(const NoisyActionEnv& other);

  const EnvSpec& spec() const override { return inner_->spec(); }
  std::vector<double> reset() override;
  StepResult step(std::span<const double> action) override;
  using Environment::step;
  bool supports_state_injection() const override { return inner_->supports_state_injection(); }
  std::vector<double> state() const override { return inner_->state(); }
  void set_state(std::span<const double> state) override;
  bool is_terminal_observation(std::span<const double> obs) const override {
    return inner_->is_terminal_observation(obs);
  }
  double reward_for_observation(std::span<const double> obs) const override {
    return inner_->reward_for_observation(obs);
  }
  std::unique_ptr<Environment> clone() const override { return std::make_unique<NoisyActionEnv>(*this); }

  double sigma() const { return sigma_; }
  /// Perturbation applied on the most recent step (for tests; the agent never sees it).
  const std::vector<double>& last_noise() const { return last_noise_; }

 private:
  std::unique_ptr<Environment> inner_;
  double sigma_;
  Rng rng_;
  std::vector<double> last_noise_;
};

std::unique_ptr<Environment> noisy_wrap(std::unique_ptr<Environment> env, double sigma, std::uint64_t seed);

}  // namespace bee::env
