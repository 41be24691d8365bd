#pragma once

#include <memory>
#include <vector>

#include "bee/agent/bac_agent.hpp"
#include "bee/diag/run_record.hpp"
#include "bee/env/environment.hpp"
#include "bee/replay/replay_buffer.hpp"

namespace bee::agent {

struct EvalResult {
  double mean_return = 0.0;
  double success_rate = 0.0;
};

/// Map an agent action in [-1, 1]^d onto the environment's box.
std::vector<double> scale_action(const std::vector<double>& a, const env::ActionSpace& space);

/// Deterministic-policy episodes of `agent` on a fresh environment.
EvalResult evaluate_agent(const BacAgent& agent, const env::EnvSpec& spec, std::uint64_t env_seed, int episodes,
                          double action_noise = 0.0);

/**
 * One seeded training run: environment, buffer, agent and the run's random
 * stream. Warm-up fills the buffer with uniform random actions; afterwards
 * every iteration is one policy step followed by one update.
 */
class BacTrainer {
 public:
  BacTrainer(BacConfig cfg, env::EnvSpec spec, std::uint64_t seed, double action_noise = 0.0);

  /// Collect the warm-up transitions (once); called implicitly by the first iterate().
  void warmup();
  diag::RunRecord iterate();
  /// Deterministic-policy episodes on a fresh environment seeded by `index`.
  EvalResult evaluate(int episodes, std::uint64_t index) const;

  BacAgent& agent() { return agent_; }
  const BacAgent& agent() const { return agent_; }
  replay::ReplayBuffer& buffer() { return buffer_; }
  const replay::ReplayBuffer& buffer() const { return buffer_; }
  env::Environment& env() { return *env_; }
  const env::EnvSpec& spec() const { return spec_; }
  Rng& rng() { return rng_; }
  std::uint64_t seed() const { return seed_; }
  long iterations() const { return iterations_; }
  const std::vector<double>& episode_returns() const { return episode_returns_; }

 private:
  /// Step the environment with an agent-space action and store the transition.
  env::StepResult env_step(const std::vector<double>& a);

  BacConfig cfg_;
  env::EnvSpec spec_;
  std::uint64_t seed_;
  double action_noise_;
  Rng rng_;
  std::unique_ptr<env::Environment> env_;
  replay::ReplayBuffer buffer_;
  BacAgent agent_;
  std::vector<double> obs_;
  double episode_return_ = 0.0;
  bool warmed_up_ = false;
  long iterations_ = 0;
  std::vector<double> episode_returns_;
  diag::RunRecord pending_;
};

}  // namespace bee::agent
