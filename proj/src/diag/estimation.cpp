#include "bee/diag/estimation.hpp"

#include <algorithm>
#include <cmath>

#include "bee/errors.hpp"

namespace bee::diag {

GapSeries estimation_gap_series(const std::vector<double>& q_values, const std::vector<double>& mc_values,
                                int window) {
  if (q_values.size() != mc_values.size()) throw ArgumentError("q and mc series differ in length");
  if (window < 1) throw ArgumentError("stage window must be >= 1");
  GapSeries g;
  for (std::size_t i = 0; i < q_values.size(); ++i) {
    if (!std::isfinite(mc_values[i])) throw ArgumentError("Monte-Carlo values must be finite");
    const double gap = q_values[i] - mc_values[i];
    g.gap.push_back(gap);
    g.gap_normalized.push_back(gap / std::max(std::abs(mc_values[i]), 1.0));
  }
  const std::size_t w = static_cast<std::size_t>(window);
  for (std::size_t i = 0; i + w <= g.gap.size(); ++i) {
    const auto first = g.gap.begin() + i;
    const bool non_positive = std::all_of(first, first + w, [](double x) { return x <= 0.0; });
    const bool some_negative = std::any_of(first, first + w, [](double x) { return x < 0.0; });
    if (non_positive && some_negative) {
      g.stage_boundary = i;
      break;
    }
  }
  return g;
}

double delta_estimate(const nn::Matrix& states, const StateValueFn& v, const StateValueFn& policy_q) {
  if (states.cols() == 0) throw StateError("delta estimate needs at least one state");
  return (v(states) - policy_q(states)).mean();
}

double delta_mu_pi(const agent::BacAgent& agent, const replay::ReplayBuffer& buffer, int batch_size, Rng& rng) {
  if (buffer.empty()) throw StateError("delta_mu_pi on an empty buffer");
  const auto batch = buffer.sample(batch_size, rng);
  return delta_estimate(
      batch.states, [&](const nn::Matrix& s) { return agent.value(s); },
      [&](const nn::Matrix& s) { return agent.q_value(s, agent.sample_actions(s, rng).first); });
}

}  // namespace bee::diag
