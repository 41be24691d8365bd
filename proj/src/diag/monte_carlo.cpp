#include "bee/diag/monte_carlo.hpp"

#include "bee/agent/trainer.hpp"
#include "bee/errors.hpp"

namespace bee::diag {

std::vector<double> monte_carlo_q(const env::Environment& env, const PolicyFn& policy,
                                  const std::vector<StateAction>& pairs, int n_rollouts, double gamma, int horizon,
                                  std::uint64_t seed) {
  if (!env.supports_state_injection()) throw CapabilityError("Monte-Carlo Q needs an environment with state injection");
  if (n_rollouts < 1 || horizon < 1) throw ArgumentError("n_rollouts and horizon must be >= 1");
  std::vector<double> out;
  out.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    double sum = 0.0;
    for (int r = 0; r < n_rollouts; ++r) {
      Rng rng(derive_seed(seed, i * static_cast<std::uint64_t>(n_rollouts) + r));
      auto e = env.clone();
      e->set_state(pairs[i].state);
      auto res = e->step(pairs[i].action);
      double ret = res.reward;
      double discount = 1.0;
      for (int t = 1; t < horizon && !res.terminated && !res.truncated; ++t) {
        discount *= gamma;
        res = e->step(policy(res.observation, rng));
        ret += discount * res.reward;
      }
      sum += ret;
    }
    out.push_back(sum / n_rollouts);
  }
  return out;
}

PolicyFn agent_policy(const agent::BacAgent& agent, const env::ActionSpace& space, bool deterministic) {
  return [&agent, space, deterministic](std::span<const double> obs, Rng& rng) {
    return agent::scale_action(agent.act(obs, rng, deterministic), space);
  };
}

}  // namespace bee::diag
