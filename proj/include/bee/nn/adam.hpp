#pragma once

#include "bee/nn/mlp.hpp"

namespace bee::nn {

struct OptimState {
  NetParams m;
  NetParams v;
  long step = 0;
  double learning_rate = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

OptimState make_optim_state(const NetParams& like, double learning_rate);

/// Bias-corrected Adam; increments `opt.step`.
void adam_step(NetParams& params, const NetParams& grads, OptimState& opt);

/// Adam on a single scalar (the entropy temperature's log).
struct ScalarAdam {
  double m = 0.0;
  double v = 0.0;
  long step = 0;
  double learning_rate = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void apply(double& param, double grad);
};

}  // namespace bee::nn
