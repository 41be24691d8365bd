#include "bee/agent/trainer.hpp"

#include "bee/env/noisy.hpp"
#include "bee/errors.hpp"

namespace bee::agent {
namespace {

std::unique_ptr<env::Environment> build_env(const env::EnvSpec& spec, std::uint64_t seed, double noise) {
  auto e = env::make_env(spec, seed);
  if (noise > 0.0) e = env::noisy_wrap(std::move(e), noise, derive_seed(seed, 7));
  return e;
}

int checked_act_dim(const env::EnvSpec& spec) {
  if (!spec.action_space.is_box()) throw ArgumentError("the deep agent needs a continuous action space");
  return spec.action_space.dim();
}

}  // namespace

std::vector<double> scale_action(const std::vector<double>& a, const env::ActionSpace& space) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = space.low[i] + 0.5 * (a[i] + 1.0) * (space.high[i] - space.low[i]);
  return out;
}

BacTrainer::BacTrainer(BacConfig cfg, env::EnvSpec spec, std::uint64_t seed, double action_noise)
    : cfg_(std::move(cfg)),
      spec_(std::move(spec)),
      seed_(seed),
      action_noise_(action_noise),
      rng_(derive_seed(seed, 0)),
      env_(build_env(spec_, derive_seed(seed, 5), action_noise)),
      buffer_(cfg_.buffer_capacity, spec_.observation_dim, checked_act_dim(spec_)),
      agent_(cfg_, spec_.observation_dim, spec_.action_space.dim(), derive_seed(seed, 6)) {
  obs_ = env_->reset();
}

env::StepResult BacTrainer::env_step(const std::vector<double>& a) {
  auto r = env_->step(scale_action(a, spec_.action_space));
  buffer_.push({obs_, a, r.reward, r.observation, r.terminated});
  episode_return_ += r.reward;
  if (r.terminated || r.truncated) {
    episode_returns_.push_back(episode_return_);
    pending_.episode_return = episode_return_;
    pending_.success = r.success ? 1.0 : 0.0;
    episode_return_ = 0.0;
    obs_ = env_->reset();
  } else {
    obs_ = r.observation;
  }
  return r;
}

void BacTrainer::warmup() {
  if (warmed_up_) return;
  warmed_up_ = true;
  const int d = spec_.action_space.dim();
  std::vector<double> a(d);
  for (int i = 0; i < cfg_.warmup_transitions; ++i) {
    for (auto& x : a) x = uniform(rng_, -1.0, 1.0);
    env_step(a);
  }
}

diag::RunRecord BacTrainer::iterate() {
  warmup();
  pending_ = {};
  env_step(agent_.act(obs_, rng_, false));
  diag::RunRecord rec = pending_;
  const auto batch = buffer_.sample(cfg_.batch_size, rng_);
  UpdateStats s;
  try {
    s = agent_.update(batch, rng_);
  } catch (const NumericError& e) {
    throw NumericError(e.what(), e.layer(), iterations_);
  }
  ++iterations_;
  rec.step = iterations_;
  rec.seed = static_cast<long>(seed_);
  rec.loss_q = s.loss_q;
  rec.loss_v = s.loss_v;
  rec.loss_pi = s.loss_pi;
  rec.alpha = s.alpha;
  rec.lambda_used = s.lambda_used;
  return rec;
}

EvalResult evaluate_agent(const BacAgent& agent, const env::EnvSpec& spec, std::uint64_t env_seed, int episodes,
                          double action_noise) {
  if (episodes < 1) throw ArgumentError("evaluation needs at least one episode");
  auto e = build_env(spec, env_seed, action_noise);
  Rng unused(0);  // deterministic actions draw nothing
  EvalResult res;
  for (int ep = 0; ep < episodes; ++ep) {
    auto obs = e->reset();
    double ret = 0.0;
    while (true) {
      auto r = e->step(scale_action(agent.act(obs, unused, true), spec.action_space));
      ret += r.reward;
      if (r.terminated || r.truncated) {
        res.success_rate += r.success ? 1.0 : 0.0;
        break;
      }
      obs = r.observation;
    }
    res.mean_return += ret;
  }
  res.mean_return /= episodes;
  res.success_rate /= episodes;
  return res;
}

EvalResult BacTrainer::evaluate(int episodes, std::uint64_t index) const {
  return evaluate_agent(agent_, spec_, derive_seed(seed_, 1000 + index), episodes, action_noise_);
}

}  // namespace bee::agent
