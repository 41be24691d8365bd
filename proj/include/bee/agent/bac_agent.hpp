#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bee/agent/config.hpp"
#include "bee/agent/lambda.hpp"
#include "bee/nn/adam.hpp"
#include "bee/nn/mlp.hpp"
#include "bee/replay/replay_buffer.hpp"

namespace bee::agent {

using nn::Matrix;
using nn::Vector;

/// The three target columns of one batch plus the weights that blended them.
struct Targets {
  Vector exploit;
  Vector explore;  ///< NaN when the blend never needed it (fixed lambda = 1)
  Vector lambda;   ///< per-row weight on the exploit column
  Vector target;
  bool explore_drawn = false;

  double mean_lambda() const { return lambda.mean(); }
};

/// One regression term of the critic loss: weight * mean (Q(s,a) - target)^2 over `batch`.
struct CriticTerm {
  const replay::Batch* batch = nullptr;
  Vector targets;
  double weight = 1.0;
};

struct UpdateStats {
  double loss_q = 0.0;
  double loss_v = 0.0;
  double loss_pi = 0.0;
  double loss_alpha = 0.0;
  double alpha = 0.0;
  double lambda_used = 0.0;
};

/**
 * Blended actor-critic: twin critics with Polyak targets, an in-sample value
 * network feeding the exploit column, a tanh-Gaussian actor feeding the
 * explore column, and a learned entropy temperature.
 *
 * Networks are initialized from streams derived from `seed` (q1: 1, q2: 2,
 * v: 3, policy: 4). Every stochastic draw during updates comes from the Rng
 * handed in by the caller.
 */
class BacAgent {
 public:
  BacAgent(BacConfig cfg, int obs_dim, int act_dim, std::uint64_t seed);

  const BacConfig& config() const { return cfg_; }
  int obs_dim() const { return obs_dim_; }
  int act_dim() const { return act_dim_; }
  long updates() const { return updates_; }

  /// Action in [-1, 1]^d. Deterministic mode returns tanh(mean).
  std::vector<double> act(std::span<const double> obs, Rng& rng, bool deterministic) const;

  /// Value, blended-target critic, policy and temperature updates on one batch.
  UpdateStats update(const replay::Batch& batch, Rng& rng);

  double update_value(const replay::Batch& batch);
  Targets blended_targets(const replay::Batch& batch, Rng& rng);
  double update_critics(const replay::Batch& batch, const Vector& targets);
  /// Weighted sum of regression terms, one Adam step per critic, then Polyak.
  double update_critics(const std::vector<CriticTerm>& terms);
  /// Returns (policy loss, temperature loss).
  std::pair<double, double> update_policy(const replay::Batch& batch, Rng& rng);

  /// min(Q1, Q2) of the online critics (Q1 alone without double Q).
  Vector q_value(const Matrix& states, const Matrix& actions) const;
  Vector target_q_value(const Matrix& states, const Matrix& actions) const;
  Vector value(const Matrix& states) const;
  /// Reparameterized policy draw for a batch of states: (actions, log-probs).
  std::pair<Matrix, Vector> sample_actions(const Matrix& states, Rng& rng) const;

  /// r + gamma (1 - done) V(s').
  Vector exploit_targets(const replay::Batch& batch) const;
  /// r + gamma (1 - done) [minQ_target(s', a') - alpha log pi(a'|s')], a' drawn fresh.
  Vector explore_targets(const replay::Batch& batch, Rng& rng) const;

  double alpha() const;
  double log_alpha() const { return log_alpha_; }
  const AdaTracker& ada() const { return ada_; }

  /// Fresh policy, value and critic networks (targets synced) and optimizer state.
  void reinitialize_networks(std::uint64_t seed);

  nn::Mlp& q1() { return q1_; }
  nn::Mlp& q2() { return q2_; }
  nn::Mlp& q1_target() { return q1_t_; }
  nn::Mlp& q2_target() { return q2_t_; }
  nn::Mlp& v() { return v_; }
  nn::Mlp& policy() { return pi_; }
  const nn::Mlp& q1() const { return q1_; }
  const nn::Mlp& q2() const { return q2_; }
  const nn::Mlp& q1_target() const { return q1_t_; }
  const nn::Mlp& q2_target() const { return q2_t_; }
  const nn::Mlp& v() const { return v_; }
  const nn::Mlp& policy() const { return pi_; }

  /// One checkpoint per network plus agent.txt with log_alpha, ada state and update count.
  void save(const std::string& dir) const;
  void load(const std::string& dir);

 private:
  BacConfig cfg_;
  int obs_dim_;
  int act_dim_;
  nn::Mlp q1_, q2_, q1_t_, q2_t_, v_, pi_;
  nn::OptimState q1_opt_, q2_opt_, v_opt_, pi_opt_;
  double log_alpha_;
  nn::ScalarAdam alpha_opt_;
  AdaTracker ada_;
  long updates_ = 0;
};

}  // namespace bee::agent
