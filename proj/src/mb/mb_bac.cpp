#include "bee/mb/mb_bac.hpp"

#include <algorithm>
#include <cmath>

#include "bee/agent/losses.hpp"
#include "bee/errors.hpp"

namespace bee::mb {

int RolloutSchedule::length(int epoch) const {
  if (epoch < 0) throw ArgumentError("epoch must be >= 0");
  const double t = static_cast<double>(epoch);
  const double v = x + (t - a) / static_cast<double>(b - a) * (y - x);
  return static_cast<int>(std::floor(std::min(std::max(v, static_cast<double>(x)), static_cast<double>(y))));
}

void RolloutSchedule::validate() const {
  if (!(a < b)) throw ArgumentError("rollout schedule needs a < b");
  if (!(x <= y)) throw ArgumentError("rollout schedule needs x <= y");
  if (x < 1) throw ArgumentError("rollout length must be >= 1");
}

std::vector<std::string> MbConfig::violations() const {
  std::vector<std::string> v;
  if (k_ensemble < 2) v.push_back("mb.k_ensemble must be >= 2");
  if (!(rollout_schedule.a < rollout_schedule.b)) v.push_back("mb.rollout_schedule needs a < b");
  if (!(rollout_schedule.x <= rollout_schedule.y)) v.push_back("mb.rollout_schedule needs x <= y");
  if (rollout_schedule.x < 1) v.push_back("mb.rollout_schedule.x must be >= 1");
  if (rollouts_per_update < 1) v.push_back("mb.rollouts_per_update must be >= 1");
  if (model_train_epochs < 1) v.push_back("mb.model_train_epochs must be >= 1");
  if (real_buffer_capacity < 1) v.push_back("mb.real_buffer_capacity must be >= 1");
  if (model_buffer_capacity < 1) v.push_back("mb.model_buffer_capacity must be >= 1");
  if (steps_per_epoch < 1) v.push_back("mb.steps_per_epoch must be >= 1");
  if (updates_per_epoch < 0) v.push_back("mb.updates_per_epoch must be >= 0");
  if (!(model_lr > 0.0)) v.push_back("mb.model_lr must be positive");
  if (model_batch_size < 1) v.push_back("mb.model_batch_size must be >= 1");
  return v;
}

void MbConfig::validate() const {
  auto v = violations();
  if (!v.empty()) throw ValidationError(std::move(v));
}

namespace {

EnsembleSpec ensemble_spec(const MbConfig& mb, const env::EnvSpec& spec) {
  EnsembleSpec e;
  e.obs_dim = spec.observation_dim;
  e.act_dim = spec.action_space.dim();
  e.k = mb.k_ensemble;
  e.hidden_sizes = mb.model_hidden;
  e.lr = mb.model_lr;
  e.batch_size = mb.model_batch_size;
  return e;
}

}  // namespace

MbBac::MbBac(agent::BacConfig cfg, MbConfig mb, env::EnvSpec spec, std::uint64_t seed)
    : cfg_(std::move(cfg)),
      mb_(std::move(mb)),
      spec_(std::move(spec)),
      seed_(seed),
      rng_(derive_seed(seed, 0)),
      env_(env::make_env(spec_, derive_seed(seed, 5))),
      real_(mb_.real_buffer_capacity, spec_.observation_dim, spec_.action_space.dim()),
      model_(mb_.model_buffer_capacity, spec_.observation_dim, spec_.action_space.dim()),
      agent_(cfg_, spec_.observation_dim, spec_.action_space.dim(), derive_seed(seed, 6)),
      ensemble_(ensemble_spec(mb_, spec_), derive_seed(seed, 8)) {
  mb_.validate();
  if (!spec_.action_space.is_box()) throw ArgumentError("model-based training needs a continuous action space");
  obs_ = env_->reset();
}

void MbBac::collect(int steps, bool random) {
  const int d = spec_.action_space.dim();
  for (int i = 0; i < steps; ++i) {
    std::vector<double> a(d);
    if (random)
      for (auto& x : a) x = uniform(rng_, -1.0, 1.0);
    else
      a = agent_.act(obs_, rng_, false);
    auto r = env_->step(agent::scale_action(a, spec_.action_space));
    real_.push({obs_, a, r.reward, r.observation, r.terminated});
    episode_return_ += r.reward;
    if (r.terminated || r.truncated) {
      episode_returns_.push_back(episode_return_);
      episode_return_ = 0.0;
      obs_ = env_->reset();
    } else {
      obs_ = r.observation;
    }
  }
}

void MbBac::generate_rollouts(int horizon) {
  model_.clear();
  rollout_lengths_.assign(mb_.rollouts_per_update, 0);
  const auto start = real_.sample(mb_.rollouts_per_update, rng_);
  Matrix states = start.states;
  std::vector<int> alive(mb_.rollouts_per_update);
  for (int i = 0; i < mb_.rollouts_per_update; ++i) alive[i] = i;
  const int obs_dim = spec_.observation_dim;
  for (int h = 0; h < horizon && !alive.empty(); ++h) {
    Matrix s(obs_dim, alive.size());
    for (std::size_t j = 0; j < alive.size(); ++j) s.col(j) = states.col(alive[j]);
    const auto [actions, logp] = agent_.sample_actions(s, rng_);
    const auto pred = ensemble_.predict(s, actions);
    std::vector<int> next_alive;
    for (std::size_t j = 0; j < alive.size(); ++j) {
      replay::Transition t;
      t.state.assign(s.col(j).data(), s.col(j).data() + obs_dim);
      t.action.assign(actions.col(j).data(), actions.col(j).data() + actions.rows());
      t.next_state.resize(obs_dim);
      for (int k = 0; k < obs_dim; ++k)
        t.next_state[k] = std::clamp(pred.next_states(k, j), spec_.observation_low[k], spec_.observation_high[k]);
      t.reward = pred.rewards[j];
      t.terminated = env_->is_terminal_observation(t.next_state);
      for (int k = 0; k < obs_dim; ++k) states(k, alive[j]) = t.next_state[k];
      model_.push(t);
      ++rollout_lengths_[alive[j]];
      if (!t.terminated) next_alive.push_back(alive[j]);
    }
    alive = std::move(next_alive);
  }
}

agent::UpdateStats MbBac::split_update(const replay::Batch& real, const replay::Batch& model) {
  agent::UpdateStats s;
  s.loss_v = agent_.update_value(real);
  const double lam = cfg_.lambda;
  std::vector<agent::CriticTerm> terms;
  terms.push_back({&real, agent_.exploit_targets(real), lam});
  if (lam < 1.0) terms.push_back({&model, agent_.explore_targets(model, rng_), 1.0 - lam});
  s.lambda_used = lam;
  s.loss_q = agent_.update_critics(terms);
  std::tie(s.loss_pi, s.loss_alpha) = agent_.update_policy(model, rng_);
  s.alpha = agent_.alpha();
  return s;
}

diag::RunRecord MbBac::epoch() {
  diag::RunRecord rec;
  try {
    if (epoch_ == 0 && cfg_.warmup_transitions > 0) collect(cfg_.warmup_transitions, true);
    collect(mb_.steps_per_epoch, false);
    model_nll_ = ensemble_.train(real_, mb_.model_train_epochs);
    generate_rollouts(mb_.rollout_schedule.length(epoch_));
    agent::UpdateStats s;
    for (int u = 0; u < mb_.updates_per_epoch; ++u) {
      const auto real = real_.sample(cfg_.batch_size, rng_);
      const auto model = model_.sample(cfg_.batch_size, rng_);
      s = split_update(real, model);
    }
    rec.loss_q = s.loss_q;
    rec.loss_v = s.loss_v;
    rec.loss_pi = s.loss_pi;
    rec.alpha = s.alpha;
    rec.lambda_used = s.lambda_used;
  } catch (const NumericError& e) {
    throw NumericError(std::string(e.what()) + " (epoch " + std::to_string(epoch_) + ")", e.layer(), epoch_);
  }
  ++epoch_;
  rec.step = epoch_;
  rec.seed = static_cast<long>(seed_);
  if (!episode_returns_.empty()) rec.episode_return = episode_returns_.back();
  return rec;
}

agent::EvalResult MbBac::evaluate(int episodes, std::uint64_t index) const {
  return agent::evaluate_agent(agent_, spec_, derive_seed(seed_, 1000 + index), episodes);
}

}  // namespace bee::mb
