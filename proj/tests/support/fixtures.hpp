#pragma once

#include <vector>

#include "bee/agent/bac_agent.hpp"
#include "bee/mb/ensemble.hpp"

namespace bee::testing {

/// Random batch; every `terminal_every`-th row is terminal (0: none).
replay::Batch random_batch(int obs_dim, int act_dim, int n, Rng& rng, int terminal_every = 0);

/// tau-expectile of a sample by bisection on the first-order condition.
double expectile_oracle(const std::vector<double>& q, double tau);

/**
 * V learned by the agent's in-sample value update when the target critics
 * are frozen to return exactly `q` at the batch's (s, a) pairs. Linear
 * networks, one shared state.
 */
double agent_expectile(const std::vector<double>& q, double tau, int steps = 6000);

/// Same fit through the loss alone (tau = 0.5 is outside the agent's config range).
double loss_expectile(const std::vector<double>& q, double tau, int steps = 6000);

/// 5k samples of s' = 2 s + a (+ noise_std eps), s and a uniform on [-1, 1], reward 0.
std::pair<nn::Matrix, nn::Matrix> linear_dynamics_data(int n, double noise_std, Rng& rng);

/// Ensemble fitted to noise-free s' = 2 s + a; mean |s'_pred - s'| over fresh inputs.
double linear_dynamics_error(std::uint64_t seed, int epochs = 50);

/**
 * Delta-hat on a constructed table Q(s, a) = 3 - 3 a^2 whose buffer holds the
 * best action a = 0 at every state, so V = 3. `greedy` false: pi uniform on
 * [-1, 1] with E[Q] = 2 (Delta = 1); true: pi always plays a = 0 (Delta = 0).
 * The policy expectation is a Monte-Carlo average over `draws` actions.
 */
double delta_fixture(bool greedy, std::uint64_t seed, int states = 32, int draws = 20000);

}  // namespace bee::testing
