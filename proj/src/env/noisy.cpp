#include "bee/env/noisy.hpp"

#include "bee/errors.hpp"

namespace bee::env {

NoisyActionEnv::NoisyActionEnv(std::unique_ptr<Environment> inner, double sigma, std::uint64_t seed)
    : inner_(std::move(inner)), sigma_(sigma), rng_(seed) {
  if (!inner_) throw ArgumentError("noisy_wrap needs an environment");
  if (!(sigma >= 0.0)) throw ArgumentError("sigma must be >= 0");
  if (!inner_->spec().action_space.is_box()) throw ArgumentError("noisy_wrap requires a box action space");
}

NoisyActionEnv::NoisyActionEnv(const NoisyActionEnv& other)
    : Environment(other), inner_(other.inner_->clone()), sigma_(other.sigma_), rng_(other.rng_),
      last_noise_(other.last_noise_) {}

std::vector<double> NoisyActionEnv::reset() {
  elapsed_ = 0;
  done_ = false;
  return inner_->reset();
}

StepResult NoisyActionEnv::step(std::span<const double> action) {
  std::vector<double> executed(action.begin(), action.end());
  last_noise_.assign(executed.size(), 0.0);
  for (std::size_t i = 0; i < executed.size(); ++i) {
    last_noise_[i] = sigma_ * standard_normal(rng_);
    executed[i] += last_noise_[i];
  }
  StepResult r = inner_->step(executed);
  elapsed_ = inner_->elapsed_steps();
  done_ = inner_->done();
  return r;
}

void NoisyActionEnv::set_state(std::span<const double> state) {
  inner_->set_state(state);
  elapsed_ = 0;
  done_ = false;
}

std::unique_ptr<Environment> noisy_wrap(std::unique_ptr<Environment> env, double sigma, std::uint64_t seed) {
  return std::make_unique<NoisyActionEnv>(std::move(env), sigma, seed);
}

}  // namespace bee::env
