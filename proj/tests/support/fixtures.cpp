#include "fixtures.hpp"

#include <algorithm>

#include "bee/agent/losses.hpp"
#include "bee/diag/estimation.hpp"

namespace bee::testing {

replay::Batch random_batch(int obs_dim, int act_dim, int n, Rng& rng, int terminal_every) {
  replay::Batch b;
  b.states.resize(obs_dim, n);
  b.actions.resize(act_dim, n);
  b.next_states.resize(obs_dim, n);
  b.rewards.resize(n);
  b.not_done.resize(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < obs_dim; ++i) {
      b.states(i, j) = uniform(rng, -1.0, 1.0);
      b.next_states(i, j) = uniform(rng, -1.0, 1.0);
    }
    for (int i = 0; i < act_dim; ++i) b.actions(i, j) = uniform(rng, -1.0, 1.0);
    b.rewards[j] = uniform(rng, -1.0, 1.0);
    b.not_done[j] = (terminal_every > 0 && j % terminal_every == 0) ? 0.0 : 1.0;
  }
  return b;
}

double expectile_oracle(const std::vector<double>& q, double tau) {
  // sum_i |tau - 1(q_i < v)| (q_i - v) is decreasing in v
  auto f = [&](double v) {
    double s = 0.0;
    for (double x : q) s += (x < v ? 1.0 - tau : tau) * (x - v);
    return s;
  };
  double lo = *std::min_element(q.begin(), q.end()), hi = *std::max_element(q.begin(), q.end());
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double agent_expectile(const std::vector<double>& q, double tau, int steps) {
  agent::BacConfig cfg;
  cfg.hidden_sizes = {};
  cfg.expectile_tau = tau;
  cfg.lr = 1e-2;
  agent::BacAgent ag(cfg, 1, 1, 11);
  // Q(s, a) = 10 a on both target critics, so action q/10 reads back q
  for (nn::Mlp* net : {&ag.q1_target(), &ag.q2_target()}) {
    auto& l = net->params().layers.at(0);
    l.weight << 0.0, 10.0;
    l.bias.setZero();
  }
  const int n = static_cast<int>(q.size());
  replay::Batch b;
  b.states = nn::Matrix::Zero(1, n);
  b.next_states = nn::Matrix::Zero(1, n);
  b.actions.resize(1, n);
  for (int j = 0; j < n; ++j) b.actions(0, j) = q[j] / 10.0;
  b.rewards = nn::Vector::Zero(n);
  b.not_done = nn::Vector::Ones(n);
  for (int k = 0; k < steps; ++k) ag.update_value(b);
  return ag.value(nn::Matrix::Zero(1, 1))[0];
}

double loss_expectile(const std::vector<double>& q, double tau, int steps) {
  Rng rng(12);
  nn::Mlp v(nn::NetSpec{1, 1, {}, nn::Activation::relu}, rng);
  auto opt = nn::make_optim_state(v.params(), 1e-2);
  const int n = static_cast<int>(q.size());
  const nn::Vector qv = Eigen::Map<const nn::Vector>(q.data(), n);
  const nn::Matrix x = nn::Matrix::Zero(1, n);
  for (int k = 0; k < steps; ++k) {
    auto fb = nn::forward_backward(
        v, x, [&](const nn::Matrix& out) { return agent::value_loss(agent::ValueLoss::expectile, qv, out, tau, 1.0); });
    nn::adam_step(v.params(), fb.grads, opt);
  }
  return v.forward(nn::Matrix::Zero(1, 1))(0, 0);
}

std::pair<nn::Matrix, nn::Matrix> linear_dynamics_data(int n, double noise_std, Rng& rng) {
  nn::Matrix x(2, n), y(2, n);
  for (int j = 0; j < n; ++j) {
    const double s = uniform(rng, -1.0, 1.0), a = uniform(rng, -1.0, 1.0);
    x(0, j) = s;
    x(1, j) = a;
    y(0, j) = s + a + noise_std * standard_normal(rng);  // delta of s' = 2 s + a
    y(1, j) = 0.0;
  }
  return {x, y};
}

double linear_dynamics_error(std::uint64_t seed, int epochs) {
  Rng rng(seed);
  mb::EnsembleSpec spec;
  spec.hidden_sizes = {32, 32};
  spec.batch_size = 64;
  mb::DynamicsEnsemble ens(spec, derive_seed(seed, 1));
  const auto [x, y] = linear_dynamics_data(5000, 0.0, rng);
  ens.train(x, y, epochs);
  const auto [tx, ty] = linear_dynamics_data(1000, 0.0, rng);
  const auto pred = ens.predict(tx.topRows(1), tx.bottomRows(1));
  double err = 0.0;
  for (Eigen::Index j = 0; j < tx.cols(); ++j) err += std::abs(pred.next_states(0, j) - (2.0 * tx(0, j) + tx(1, j)));
  return err / static_cast<double>(tx.cols());
}

double delta_fixture(bool greedy, std::uint64_t seed, int states, int draws) {
  Rng rng(seed);
  nn::Matrix s(1, states);
  for (int j = 0; j < states; ++j) s(0, j) = uniform(rng, -1.0, 1.0);
  auto q = [](double a) { return 3.0 - 3.0 * a * a; };
  const std::vector<double> buffer_actions{0.0};
  auto v = [&](const nn::Matrix& x) {
    double best = -1e300;
    for (double a : buffer_actions) best = std::max(best, q(a));
    return nn::Vector::Constant(x.cols(), best);
  };
  auto policy_q = [&](const nn::Matrix& x) {
    nn::Vector out(x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (greedy) {
        out[j] = q(0.0);
        continue;
      }
      double sum = 0.0;
      for (int k = 0; k < draws; ++k) sum += q(uniform(rng, -1.0, 1.0));
      out[j] = sum / draws;
    }
    return out;
  };
  return diag::delta_estimate(s, v, policy_q);
}

}  // namespace bee::testing
