#include "bee/agent/lambda.hpp"

#include <algorithm>

#include "bee/errors.hpp"

namespace bee::agent {

double ada_lambda(double delta_now, double delta_prev) {
  if (!(delta_prev > 0.0)) return 1.0;
  return std::clamp(delta_now / delta_prev, 0.0, 1.0);
}

Eigen::VectorXd row_lambda(LambdaMode mode, double lambda, const Eigen::VectorXd& exploit,
                           const Eigen::VectorXd& explore) {
  const Eigen::Index n = exploit.size();
  if (explore.size() != n) throw ArgumentError("row_lambda: column sizes differ");
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    switch (mode) {
      case LambdaMode::fixed: w[i] = lambda; break;
      case LambdaMode::min: w[i] = exploit[i] <= explore[i] ? 1.0 : 0.0; break;
      case LambdaMode::max: w[i] = exploit[i] >= explore[i] ? 1.0 : 0.0; break;
      case LambdaMode::ada: throw ArgumentError("row_lambda: ada is a scalar mode");
    }
  }
  return w;
}

double AdaTracker::advance(double delta_now, double initial_lambda) {
  if (!primed) {
    ema = delta_now;
    primed = true;
    last_lambda = initial_lambda;
    return last_lambda;
  }
  last_lambda = ada_lambda(delta_now, ema);
  ema = decay * ema + (1.0 - decay) * delta_now;
  return last_lambda;
}

}  // namespace bee::agent
