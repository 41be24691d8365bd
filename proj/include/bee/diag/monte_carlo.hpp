#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "bee/agent/bac_agent.hpp"
#include "bee/env/environment.hpp"

namespace bee::diag {

/// Maps an observation to an environment-space action.
using PolicyFn = std::function<std::vector<double>(std::span<const double> obs, Rng& rng)>;

struct StateAction {
  std::vector<double> state;
  std::vector<double> action;  ///< environment space
};

/**
 * Discounted return of: inject the state, take the given action, then follow
 * `policy`; `horizon` counts every step including the first, and rollouts also
 * stop on termination or the environment's own truncation. The environment is
 * cloned per rollout and left untouched. Rollout r of pair i draws from the
 * stream derive_seed(seed, i * n_rollouts + r).
 */
std::vector<double> monte_carlo_q(const env::Environment& env, const PolicyFn& policy,
                                  const std::vector<StateAction>& pairs, int n_rollouts, double gamma, int horizon,
                                  std::uint64_t seed);

/// The agent's policy mapped onto `space` (stochastic unless `deterministic`).
PolicyFn agent_policy(const agent::BacAgent& agent, const env::ActionSpace& space, bool deterministic);

}  // namespace bee::diag
