#include "bee/nn/adam.hpp"

#include <cmath>

#include "bee/errors.hpp"

namespace bee::nn {

OptimState make_optim_state(const NetParams& like, double learning_rate) {
  OptimState s;
  s.m = NetParams::zeros_like(like);
  s.v = NetParams::zeros_like(like);
  s.learning_rate = learning_rate;
  return s;
}

void adam_step(NetParams& params, const NetParams& grads, OptimState& opt) {
  if (params.layers.size() != grads.layers.size() || params.layers.size() != opt.m.layers.size())
    throw ArgumentError("adam: parameter/gradient/moment shapes differ");
  ++opt.step;
  const double c1 = 1.0 - std::pow(opt.beta1, static_cast<double>(opt.step));
  const double c2 = 1.0 - std::pow(opt.beta2, static_cast<double>(opt.step));
  const double step_size = opt.learning_rate / c1;
  const double inv_sqrt_c2 = 1.0 / std::sqrt(c2);

  auto update = [&](auto& p, const auto& g, auto& m, auto& v) {
    if (p.size() != g.size()) throw ArgumentError("adam: gradient shape mismatch");
    m = opt.beta1 * m + (1.0 - opt.beta1) * g;
    v = opt.beta2 * v + (1.0 - opt.beta2) * g.cwiseProduct(g);
    p.array() -= step_size * m.array() / ((v.array().sqrt() * inv_sqrt_c2) + opt.epsilon);
  };
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    update(params.layers[i].weight, grads.layers[i].weight, opt.m.layers[i].weight, opt.v.layers[i].weight);
    update(params.layers[i].bias, grads.layers[i].bias, opt.m.layers[i].bias, opt.v.layers[i].bias);
  }
}

void ScalarAdam::apply(double& param, double grad) {
  ++step;
  m = beta1 * m + (1.0 - beta1) * grad;
  v = beta2 * v + (1.0 - beta2) * grad * grad;
  const double mhat = m / (1.0 - std::pow(beta1, static_cast<double>(step)));
  const double vhat = v / (1.0 - std::pow(beta2, static_cast<double>(step)));
  param -= learning_rate * mhat / (std::sqrt(vhat) + epsilon);
}

}  // namespace bee::nn
