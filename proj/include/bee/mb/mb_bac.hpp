#pragma once

#include <memory>
#include <vector>

#include "bee/agent/bac_agent.hpp"
#include "bee/agent/trainer.hpp"
#include "bee/diag/run_record.hpp"
#include "bee/env/environment.hpp"
#include "bee/mb/ensemble.hpp"

namespace bee::mb {

/// Linear rollout length f(t) = min(max(x + (t-a)/(b-a) (y-x), x), y), floored.
struct RolloutSchedule {
  int x = 1;
  int y = 15;
  int a = 20;
  int b = 100;

  int length(int epoch) const;
  void validate() const;
};

struct MbConfig {
  int k_ensemble = 5;
  RolloutSchedule rollout_schedule;
  int rollouts_per_update = 400;  ///< model rollouts started per epoch
  int model_train_epochs = 5;     ///< passes over the real buffer per member per epoch
  int real_buffer_capacity = 100000;
  int model_buffer_capacity = 100000;
  int steps_per_epoch = 1000;     ///< real environment steps per epoch
  int updates_per_epoch = 1000;
  std::vector<int> model_hidden{128, 128};
  double model_lr = 1e-3;
  int model_batch_size = 256;

  std::vector<std::string> violations() const;
  void validate() const;
};

/**
 * Dyna-style loop. Real transitions (D_e) feed the ensemble, the value network
 * and the exploit half of the critic loss; model rollouts (D_m, rebuilt every
 * epoch) feed the explore half and the policy.
 *
 * Critic loss: lambda mean_{D_e}(Q - y_exploit)^2 + (1 - lambda) mean_{D_m}(Q - y_explore)^2.
 */
class MbBac {
 public:
  MbBac(agent::BacConfig cfg, MbConfig mb, env::EnvSpec spec, std::uint64_t seed);

  /// Collect real steps, refit the ensemble, regenerate D_m, then run the updates.
  diag::RunRecord epoch();
  /// Split-rule update on one real and one model batch.
  agent::UpdateStats split_update(const replay::Batch& real, const replay::Batch& model);

  agent::EvalResult evaluate(int episodes, std::uint64_t index) const;

  int epochs_done() const { return epoch_; }
  /// Length of every model trajectory produced in the latest epoch.
  const std::vector<int>& rollout_lengths() const { return rollout_lengths_; }
  const std::vector<double>& last_model_nll() const { return model_nll_; }

  agent::BacAgent& agent() { return agent_; }
  const agent::BacAgent& agent() const { return agent_; }
  DynamicsEnsemble& ensemble() { return ensemble_; }
  replay::ReplayBuffer& real_buffer() { return real_; }
  replay::ReplayBuffer& model_buffer() { return model_; }
  Rng& rng() { return rng_; }

 private:
  void collect(int steps, bool random);
  void generate_rollouts(int horizon);

  agent::BacConfig cfg_;
  MbConfig mb_;
  env::EnvSpec spec_;
  std::uint64_t seed_;
  Rng rng_;
  std::unique_ptr<env::Environment> env_;
  replay::ReplayBuffer real_;
  replay::ReplayBuffer model_;
  agent::BacAgent agent_;
  DynamicsEnsemble ensemble_;
  std::vector<double> obs_;
  double episode_return_ = 0.0;
  std::vector<double> episode_returns_;
  std::vector<int> rollout_lengths_;
  std::vector<double> model_nll_;
  int epoch_ = 0;
};

}  // namespace bee::mb
