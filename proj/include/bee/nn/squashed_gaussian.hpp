#pragma once

#include "bee/nn/mlp.hpp"

namespace bee::nn {

inline constexpr double kLogStdMin = -20.0;
inline constexpr double kLogStdMax = 2.0;
inline constexpr double kTanhEps = 1e-6;

/**
 * Reparameterized tanh-Gaussian draw for a batch.
 *
 * `policy_out` stacks the mean (rows 0..d-1) over the raw log-std
 * (rows d..2d-1). The sample keeps what `backward` needs, so gradients flow
 * from the action and the log-probability back to the policy output.
 */
struct SquashedGaussian {
  Matrix action;    ///< d x n, strictly inside (-1, 1)
  Vector log_prob;  ///< n

  Matrix noise;     ///< standard normal draws
  Matrix std_dev;   ///< exp(clamped log-std)
  Matrix clamped;   ///< 1 where the raw log-std was clamped (no gradient)

  static SquashedGaussian sample(const Matrix& policy_out, Rng& rng);
  /// Same, with caller-provided standard-normal noise (d x n).
  static SquashedGaussian from_noise(const Matrix& policy_out, const Matrix& noise);

  /// dL/d(policy_out) from dL/d(action) and dL/d(log_prob).
  Matrix backward(const Matrix& grad_action, const Vector& grad_log_prob) const;

  int action_dim() const { return static_cast<int>(action.rows()); }
};

/// tanh(mean): the deterministic action used for evaluation and the smoothing variant.
Matrix deterministic_action(const Matrix& policy_out);

/// Log-density of a tanh-Gaussian at `action` (used by the density test and diagnostics).
double squashed_log_prob(double mean, double log_std, double action);

}  // namespace bee::nn
