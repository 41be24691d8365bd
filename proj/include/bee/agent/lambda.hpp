#pragma once

#include <Eigen/Dense>

#include "bee/agent/config.hpp"

namespace bee::agent {

/// clip(delta_now / delta_prev, 0, 1); a non-positive history gives 1.
double ada_lambda(double delta_now, double delta_prev);

/**
 * Per-row blend weight for the stateless modes: fixed gives `lambda`
 * everywhere, min picks the exploit target iff it is the smaller one, max iff
 * it is the larger one. ada is scalar and handled by AdaTracker.
 */
Eigen::VectorXd row_lambda(LambdaMode mode, double lambda, const Eigen::VectorXd& exploit,
                           const Eigen::VectorXd& explore);

/// EMA of the mean absolute TD error; the previous value is the ratio's denominator.
struct AdaTracker {
  double decay = 0.99;
  double ema = 0.0;
  bool primed = false;
  double last_lambda = 0.0;

  /// Lambda for this batch given its TD error, then fold the error into the EMA.
  double advance(double delta_now, double initial_lambda);
};

}  // namespace bee::agent
