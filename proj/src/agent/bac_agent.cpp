#include "bee/agent/bac_agent.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "bee/agent/losses.hpp"
#include "bee/errors.hpp"
#include "bee/nn/checkpoint.hpp"
#include "bee/nn/squashed_gaussian.hpp"

namespace bee::agent {
namespace {

nn::Mlp make_net(int in, int out, const BacConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  return nn::Mlp(nn::NetSpec{in, out, cfg.hidden_sizes, cfg.activation}, rng);
}

Matrix normal_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = standard_normal(rng);
  return m;
}

Vector row(const Matrix& m) { return m.row(0).transpose(); }

}  // namespace

BacAgent::BacAgent(BacConfig cfg, int obs_dim, int act_dim, std::uint64_t seed)
    : cfg_(std::move(cfg)), obs_dim_(obs_dim), act_dim_(act_dim) {
  cfg_.validate();
  if (obs_dim < 1 || act_dim < 1) throw ArgumentError("agent dims must be positive");
  log_alpha_ = std::log(cfg_.init_alpha);
  alpha_opt_.learning_rate = cfg_.lr;
  ada_.decay = cfg_.ada_decay;
  reinitialize_networks(seed);
}

void BacAgent::reinitialize_networks(std::uint64_t seed) {
  q1_ = make_net(obs_dim_ + act_dim_, 1, cfg_, derive_seed(seed, 1));
  q2_ = make_net(obs_dim_ + act_dim_, 1, cfg_, derive_seed(seed, 2));
  v_ = make_net(obs_dim_, 1, cfg_, derive_seed(seed, 3));
  pi_ = make_net(obs_dim_, 2 * act_dim_, cfg_, derive_seed(seed, 4));
  q1_t_ = q1_;
  q2_t_ = q2_;
  q1_opt_ = nn::make_optim_state(q1_.params(), cfg_.lr);
  q2_opt_ = nn::make_optim_state(q2_.params(), cfg_.lr);
  v_opt_ = nn::make_optim_state(v_.params(), cfg_.lr);
  pi_opt_ = nn::make_optim_state(pi_.params(), cfg_.lr);
}

double BacAgent::alpha() const { return std::exp(log_alpha_); }

std::vector<double> BacAgent::act(std::span<const double> obs, Rng& rng, bool deterministic) const {
  if (static_cast<int>(obs.size()) != obs_dim_) throw ArgumentError("observation has wrong dimension");
  Matrix x(obs_dim_, 1);
  for (int i = 0; i < obs_dim_; ++i) x(i, 0) = obs[i];
  const Matrix out = pi_.forward(x);
  std::vector<double> a(act_dim_);
  if (deterministic) {
    for (int i = 0; i < act_dim_; ++i) a[i] = std::tanh(out(i, 0));
  } else if (cfg_.explore_variant == ExploreVariant::entropy) {
    const auto draw = nn::SquashedGaussian::sample(out, rng);
    for (int i = 0; i < act_dim_; ++i) a[i] = draw.action(i, 0);
  } else {
    for (int i = 0; i < act_dim_; ++i)
      a[i] = std::clamp(std::tanh(out(i, 0)) + cfg_.exploration_noise * standard_normal(rng), -1.0, 1.0);
  }
  return a;
}

Vector BacAgent::q_value(const Matrix& states, const Matrix& actions) const {
  const Matrix x = critic_input(states, actions);
  Vector q = row(q1_.forward(x));
  if (cfg_.double_q) q = q.cwiseMin(row(q2_.forward(x)));
  return q;
}

Vector BacAgent::target_q_value(const Matrix& states, const Matrix& actions) const {
  const Matrix x = critic_input(states, actions);
  Vector q = row(q1_t_.forward(x));
  if (cfg_.double_q) q = q.cwiseMin(row(q2_t_.forward(x)));
  return q;
}

Vector BacAgent::value(const Matrix& states) const { return row(v_.forward(states)); }

std::pair<Matrix, Vector> BacAgent::sample_actions(const Matrix& states, Rng& rng) const {
  const Matrix noise = normal_matrix(act_dim_, states.cols(), rng);
  auto draw = nn::SquashedGaussian::from_noise(pi_.forward(states), noise);
  return {std::move(draw.action), std::move(draw.log_prob)};
}

double BacAgent::update_value(const replay::Batch& batch) {
  const Vector q = target_q_value(batch.states, batch.actions);
  auto fb = nn::forward_backward(v_, batch.states, [&](const Matrix& out) {
    return value_loss(cfg_.value_loss, q, out, cfg_.expectile_tau, cfg_.value_alpha);
  });
  nn::adam_step(v_.params(), fb.grads, v_opt_);
  return fb.loss;
}

Vector BacAgent::exploit_targets(const replay::Batch& batch) const {
  const Vector v = value(batch.next_states);
  return batch.rewards.array() + cfg_.gamma * batch.not_done.array() * v.array();
}

Vector BacAgent::explore_targets(const replay::Batch& batch, Rng& rng) const {
  const Eigen::Index n = batch.size();
  const Matrix out = pi_.forward(batch.next_states);
  Vector bootstrap;
  if (cfg_.explore_variant == ExploreVariant::entropy) {
    const Matrix noise = normal_matrix(act_dim_, n, rng);
    const auto draw = nn::SquashedGaussian::from_noise(out, noise);
    bootstrap = target_q_value(batch.next_states, draw.action) - alpha() * draw.log_prob;
  } else {
    Matrix a = nn::deterministic_action(out);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < a.rows(); ++i) {
        const double eps = std::clamp(cfg_.smoothing_sigma * standard_normal(rng), -cfg_.smoothing_clip,
                                      cfg_.smoothing_clip);
        a(i, j) = std::clamp(a(i, j) + eps, -1.0, 1.0);
      }
    bootstrap = target_q_value(batch.next_states, a);
  }
  return batch.rewards.array() + cfg_.gamma * batch.not_done.array() * bootstrap.array();
}

Targets BacAgent::blended_targets(const replay::Batch& batch, Rng& rng) {
  const Eigen::Index n = batch.size();
  Targets t;
  t.exploit = exploit_targets(batch);
  if (cfg_.lambda_mode == LambdaMode::fixed && cfg_.lambda == 1.0) {
    t.explore = Vector::Constant(n, std::numeric_limits<double>::quiet_NaN());
    t.lambda = Vector::Ones(n);
    t.target = t.exploit;
    return t;
  }
  t.explore = explore_targets(batch, rng);
  t.explore_drawn = true;
  if (cfg_.lambda_mode == LambdaMode::ada) {
    const double prev = ada_.primed ? ada_.last_lambda : cfg_.lambda;
    const Vector provisional = prev * t.exploit + (1.0 - prev) * t.explore;
    const double delta = (provisional - q_value(batch.states, batch.actions)).cwiseAbs().mean();
    t.lambda = Vector::Constant(n, ada_.advance(delta, cfg_.lambda));
  } else {
    t.lambda = row_lambda(cfg_.lambda_mode, cfg_.lambda, t.exploit, t.explore);
  }
  t.target.resize(n);
  for (Eigen::Index i = 0; i < n; ++i)
    t.target[i] = t.lambda[i] * t.exploit[i] + (1.0 - t.lambda[i]) * t.explore[i];
  return t;
}

double BacAgent::update_critics(const replay::Batch& batch, const Vector& targets) {
  return update_critics(std::vector<CriticTerm>{{&batch, targets, 1.0}});
}

double BacAgent::update_critics(const std::vector<CriticTerm>& terms) {
  auto step = [&](nn::Mlp& net, nn::Mlp& target, nn::OptimState& opt) {
    double loss = 0.0;
    nn::NetParams grads = nn::NetParams::zeros_like(net.params());
    for (const auto& term : terms) {
      if (term.weight == 0.0) continue;
      auto fb = nn::forward_backward(net, critic_input(term.batch->states, term.batch->actions),
                                     [&](const Matrix& out) { return squared_td(out, term.targets); });
      loss += term.weight * fb.loss;
      for (std::size_t l = 0; l < grads.layers.size(); ++l) {
        if (term.weight == 1.0) {
          grads.layers[l].weight += fb.grads.layers[l].weight;
          grads.layers[l].bias += fb.grads.layers[l].bias;
        } else {
          grads.layers[l].weight += term.weight * fb.grads.layers[l].weight;
          grads.layers[l].bias += term.weight * fb.grads.layers[l].bias;
        }
      }
    }
    nn::adam_step(net.params(), grads, opt);
    nn::polyak_update(target.params(), net.params(), cfg_.polyak_rho);
    return loss;
  };
  double total = step(q1_, q1_t_, q1_opt_);
  if (cfg_.double_q) total += step(q2_, q2_t_, q2_opt_);
  return total;
}

std::pair<double, double> BacAgent::update_policy(const replay::Batch& batch, Rng& rng) {
  if (cfg_.explore_variant == ExploreVariant::target_smoothing) {
    auto obj = deterministic_policy_objective(pi_, q1_, batch.states);
    nn::adam_step(pi_.params(), obj.grads, pi_opt_);
    return {obj.loss, 0.0};
  }
  const Matrix noise = normal_matrix(act_dim_, batch.size(), rng);
  const double a = alpha();
  auto obj = stochastic_policy_objective(pi_, q1_, cfg_.double_q ? &q2_ : nullptr, batch.states, noise, a);
  nn::adam_step(pi_.params(), obj.grads, pi_opt_);
  double alpha_loss = 0.0;
  if (cfg_.learn_alpha) {
    const double c = obj.mean_log_prob + cfg_.entropy_target(act_dim_);
    alpha_loss = -a * c;
    alpha_opt_.apply(log_alpha_, -a * c);
  }
  return {obj.loss, alpha_loss};
}

UpdateStats BacAgent::update(const replay::Batch& batch, Rng& rng) {
  UpdateStats s;
  try {
    s.loss_v = update_value(batch);
    const Targets t = blended_targets(batch, rng);
    s.lambda_used = t.mean_lambda();
    s.loss_q = update_critics(batch, t.target);
    std::tie(s.loss_pi, s.loss_alpha) = update_policy(batch, rng);
  } catch (const NumericError& e) {
    throw NumericError(e.what(), e.layer(), updates_);
  }
  s.alpha = alpha();
  ++updates_;
  return s;
}

void BacAgent::save(const std::string& dir) const {
  std::filesystem::create_directories(dir);
  const std::filesystem::path d(dir);
  nn::save_checkpoint((d / "q1.bin").string(), q1_);
  nn::save_checkpoint((d / "q2.bin").string(), q2_);
  nn::save_checkpoint((d / "q1_target.bin").string(), q1_t_);
  nn::save_checkpoint((d / "q2_target.bin").string(), q2_t_);
  nn::save_checkpoint((d / "v.bin").string(), v_);
  nn::save_checkpoint((d / "policy.bin").string(), pi_);
  std::ofstream f(d / "agent.txt");
  f.precision(17);
  f << "log_alpha " << log_alpha_ << "\nada_ema " << ada_.ema << "\nada_primed " << ada_.primed << "\nada_lambda "
    << ada_.last_lambda << "\nupdates " << updates_ << "\n";
}

void BacAgent::load(const std::string& dir) {
  const std::filesystem::path d(dir);
  auto check = [&](const nn::Mlp& loaded, const nn::Mlp& like) {
    if (!(loaded.spec() == like.spec())) throw ArgumentError("checkpoint in " + dir + " does not match the agent");
    return loaded;
  };
  q1_ = check(nn::load_checkpoint((d / "q1.bin").string()), q1_);
  q2_ = check(nn::load_checkpoint((d / "q2.bin").string()), q2_);
  q1_t_ = check(nn::load_checkpoint((d / "q1_target.bin").string()), q1_t_);
  q2_t_ = check(nn::load_checkpoint((d / "q2_target.bin").string()), q2_t_);
  v_ = check(nn::load_checkpoint((d / "v.bin").string()), v_);
  pi_ = check(nn::load_checkpoint((d / "policy.bin").string()), pi_);
  std::ifstream f(d / "agent.txt");
  if (!f) throw ArgumentError("missing agent.txt in " + dir);
  std::string key;
  while (f >> key) {
    if (key == "log_alpha") f >> log_alpha_;
    else if (key == "ada_ema") f >> ada_.ema;
    else if (key == "ada_primed") f >> ada_.primed;
    else if (key == "ada_lambda") f >> ada_.last_lambda;
    else if (key == "updates") f >> updates_;
    else throw ArgumentError("unknown key '" + key + "' in agent.txt");
  }
}

}  // namespace bee::agent
