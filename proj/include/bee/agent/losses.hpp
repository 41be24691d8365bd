#pragma once

#include "bee/agent/config.hpp"
#include "bee/nn/mlp.hpp"

namespace bee::agent {

using nn::LossValue;
using nn::Matrix;
using nn::Vector;

inline constexpr double kExpClip = 20.0;

/**
 * In-sample value regression of V (1 x n network output) toward critic
 * values q. Gradient is w.r.t. V.
 *   expectile:     mean |tau - 1(q-V<0)| (q-V)^2
 *   sparse_q:      mean 1(z>0) z^2 + V/(2a),  z = 1 + (q-V)/(2a)
 *   exponential_q: mean exp(min((q-V)/a, 20)) + V/a
 */
LossValue value_loss(ValueLoss kind, const Vector& q, const Matrix& v, double tau, double alpha);

/// mean (pred - target)^2 over a 1 x n prediction.
LossValue squared_td(const Matrix& pred, const Vector& target);

/**
 * Diagonal Gaussian NLL. `out` stacks means (rows 0..m-1) over log-variances
 * (rows m..2m-1), the latter clamped to [-10, 4] with zero gradient outside.
 * Loss: batch mean of sum_d (mu-y)^2 exp(-lv) + lv.
 */
LossValue gaussian_nll(const Matrix& out, const Matrix& target);

inline constexpr double kLogVarMin = -10.0;
inline constexpr double kLogVarMax = 4.0;

struct PolicyObjective {
  double loss = 0.0;
  double mean_log_prob = 0.0;
  nn::NetParams grads;  ///< w.r.t. the policy network
};

/**
 * mean(alpha log pi(a|s) - Q(s,a)) with a = tanh(mean + std * noise). Q is
 * min(q1, q2) per sample, or q1 alone when q2 is null. Gradients reach the
 * policy through the action and the log-probability; critics are read only.
 */
PolicyObjective stochastic_policy_objective(const nn::Mlp& policy, const nn::Mlp& q1, const nn::Mlp* q2,
                                            const Matrix& states, const Matrix& noise, double alpha);

/// -mean Q1(s, tanh(mean(s))): the deterministic variant's actor loss.
PolicyObjective deterministic_policy_objective(const nn::Mlp& policy, const nn::Mlp& q1, const Matrix& states);

/// Stack states over actions into critic inputs.
Matrix critic_input(const Matrix& states, const Matrix& actions);

}  // namespace bee::agent
