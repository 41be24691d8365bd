#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "bee/agent/bac_agent.hpp"
#include "bee/replay/replay_buffer.hpp"

namespace bee::diag {

struct GapSeries {
  std::vector<double> gap;             ///< learned - Monte-Carlo; negative = underestimation
  std::vector<double> gap_normalized;  ///< gap / max(|mc|, 1)
  /// First index whose next `window` gaps are all <= 0 with at least one < 0.
  std::optional<std::size_t> stage_boundary;
};

inline constexpr int kDefaultStageWindow = 10;

GapSeries estimation_gap_series(const std::vector<double>& q_values, const std::vector<double>& mc_values,
                                int window = kDefaultStageWindow);

/// Batch of states -> one value per column.
using StateValueFn = std::function<nn::Vector(const nn::Matrix& states)>;

/// mean over states of [v(s) - policy_q(s)]: buffer-supported value minus the policy's expected Q.
double delta_estimate(const nn::Matrix& states, const StateValueFn& v, const StateValueFn& policy_q);

/// Delta-hat for an agent: V(s) against min Q(s, a ~ pi) over a buffer batch.
double delta_mu_pi(const agent::BacAgent& agent, const replay::ReplayBuffer& buffer, int batch_size, Rng& rng);

}  // namespace bee::diag
