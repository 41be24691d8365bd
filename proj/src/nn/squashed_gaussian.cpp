#include "bee/nn/squashed_gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bee/errors.hpp"

namespace bee::nn {
namespace {

const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);
// tanh rounds to +-1 for |u| > ~19; keep samples strictly inside the box
const double kActionMax = std::nextafter(1.0, 0.0);

}  // namespace

SquashedGaussian SquashedGaussian::sample(const Matrix& policy_out, Rng& rng) {
  if (policy_out.rows() % 2 != 0) throw ArgumentError("policy output must stack mean and log-std");
  Matrix noise(policy_out.rows() / 2, policy_out.cols());
  // column-major draw order: all dims of sample 0, then sample 1, ...
  for (Eigen::Index j = 0; j < noise.cols(); ++j)
    for (Eigen::Index i = 0; i < noise.rows(); ++i) noise(i, j) = standard_normal(rng);
  return from_noise(policy_out, noise);
}

SquashedGaussian SquashedGaussian::from_noise(const Matrix& policy_out, const Matrix& noise) {
  const Eigen::Index d = policy_out.rows() / 2;
  const Eigen::Index n = policy_out.cols();
  SquashedGaussian s;
  s.noise = noise;
  s.std_dev.resize(d, n);
  s.clamped.resize(d, n);
  s.action.resize(d, n);
  s.log_prob = Vector::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double lp = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
      const double raw = policy_out(d + i, j);
      const double ls = std::clamp(raw, kLogStdMin, kLogStdMax);
      s.clamped(i, j) = (raw < kLogStdMin || raw > kLogStdMax) ? 1.0 : 0.0;
      const double sd = std::exp(ls);
      s.std_dev(i, j) = sd;
      const double eps = noise(i, j);
      const double u = policy_out(i, j) + sd * eps;
      const double a = std::clamp(std::tanh(u), -kActionMax, kActionMax);
      s.action(i, j) = a;
      lp += -0.5 * eps * eps - ls - kHalfLog2Pi - std::log(1.0 - a * a + kTanhEps);
    }
    s.log_prob[j] = lp;
  }
  return s;
}

Matrix SquashedGaussian::backward(const Matrix& grad_action, const Vector& grad_log_prob) const {
  const Eigen::Index d = action.rows();
  const Eigen::Index n = action.cols();
  Matrix g(2 * d, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const double a = action(i, j);
      const double one_minus = 1.0 - a * a;
      // d(log_prob)/du from the tanh correction term
      const double dlp_du = 2.0 * a * one_minus / (one_minus + kTanhEps);
      const double du = grad_action(i, j) * one_minus + grad_log_prob[j] * dlp_du;
      g(i, j) = du;
      const double dls = du * std_dev(i, j) * noise(i, j) - grad_log_prob[j];
      g(d + i, j) = clamped(i, j) != 0.0 ? 0.0 : dls;
    }
  }
  return g;
}

Matrix deterministic_action(const Matrix& policy_out) {
  const Eigen::Index d = policy_out.rows() / 2;
  return policy_out.topRows(d).array().tanh().matrix();
}

double squashed_log_prob(double mean, double log_std, double action) {
  const double ls = std::clamp(log_std, kLogStdMin, kLogStdMax);
  const double sd = std::exp(ls);
  const double u = std::atanh(action);
  const double z = (u - mean) / sd;
  return -0.5 * z * z - ls - kHalfLog2Pi - std::log(1.0 - action * action + kTanhEps);
}

}  // namespace bee::nn
