#include "bee/agent/losses.hpp"

#include <algorithm>
#include <cmath>

#include "bee/errors.hpp"
#include "bee/nn/squashed_gaussian.hpp"

namespace bee::agent {

LossValue value_loss(ValueLoss kind, const Vector& q, const Matrix& v, double tau, double alpha) {
  const Eigen::Index n = q.size();
  if (v.rows() != 1 || v.cols() != n) throw ArgumentError("value_loss: V must be 1 x batch");
  LossValue out{0.0, Matrix(1, n)};
  const double inv_n = 1.0 / static_cast<double>(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double u = q[j] - v(0, j);
    switch (kind) {
      case ValueLoss::expectile: {
        const double w = u < 0.0 ? 1.0 - tau : tau;
        out.loss += w * u * u;
        out.grad(0, j) = -2.0 * w * u * inv_n;
        break;
      }
      case ValueLoss::sparse_q: {
        const double z = 1.0 + u / (2.0 * alpha);
        double g = 1.0 / (2.0 * alpha);
        if (z > 0.0) {
          out.loss += z * z;
          g -= z / alpha;
        }
        out.loss += v(0, j) / (2.0 * alpha);
        out.grad(0, j) = g * inv_n;
        break;
      }
      case ValueLoss::exponential_q: {
        const double e = u / alpha;
        double g = 1.0 / alpha;
        if (e < kExpClip) {
          const double x = std::exp(e);
          out.loss += x;
          g -= x / alpha;
        } else {
          out.loss += std::exp(kExpClip);
        }
        out.loss += v(0, j) / alpha;
        out.grad(0, j) = g * inv_n;
        break;
      }
    }
  }
  out.loss *= inv_n;
  return out;
}

LossValue squared_td(const Matrix& pred, const Vector& target) {
  const Eigen::Index n = target.size();
  if (pred.rows() != 1 || pred.cols() != n) throw ArgumentError("squared_td: prediction must be 1 x batch");
  const Matrix diff = pred - target.transpose();
  return {diff.squaredNorm() / static_cast<double>(n), 2.0 * diff / static_cast<double>(n)};
}

LossValue gaussian_nll(const Matrix& out, const Matrix& target) {
  const Eigen::Index m = target.rows();
  const Eigen::Index n = target.cols();
  if (out.rows() != 2 * m || out.cols() != n) throw ArgumentError("gaussian_nll: output must stack mean over log-variance");
  LossValue res{0.0, Matrix(2 * m, n)};
  const double inv_n = 1.0 / static_cast<double>(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) {
      const double raw = out(m + i, j);
      const double lv = std::clamp(raw, kLogVarMin, kLogVarMax);
      const double inv_var = std::exp(-lv);
      const double d = out(i, j) - target(i, j);
      res.loss += d * d * inv_var + lv;
      res.grad(i, j) = 2.0 * d * inv_var * inv_n;
      const bool clamped = raw < kLogVarMin || raw > kLogVarMax;
      res.grad(m + i, j) = clamped ? 0.0 : (1.0 - d * d * inv_var) * inv_n;
    }
  }
  res.loss *= inv_n;
  return res;
}

Matrix critic_input(const Matrix& states, const Matrix& actions) {
  Matrix x(states.rows() + actions.rows(), states.cols());
  x.topRows(states.rows()) = states;
  x.bottomRows(actions.rows()) = actions;
  return x;
}

PolicyObjective stochastic_policy_objective(const nn::Mlp& policy, const nn::Mlp& q1, const nn::Mlp* q2,
                                            const Matrix& states, const Matrix& noise, double alpha) {
  const Eigen::Index n = states.cols();
  const Eigen::Index s_dim = states.rows();
  const double inv_n = 1.0 / static_cast<double>(n);

  nn::Tape ptape;
  const Matrix pout = policy.forward(states, ptape);
  const auto draw = nn::SquashedGaussian::from_noise(pout, noise);
  const Matrix x = critic_input(states, draw.action);

  nn::Tape t1, t2;
  const Matrix v1 = q1.forward(x, t1);
  Matrix v2;
  if (q2) v2 = q2->forward(x, t2);

  // per sample: which critic supplies the min
  Matrix g1 = Matrix::Zero(1, n), g2 = Matrix::Zero(1, n);
  double loss = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const bool use2 = q2 && v2(0, j) < v1(0, j);
    const double q = use2 ? v2(0, j) : v1(0, j);
    loss += alpha * draw.log_prob[j] - q;
    (use2 ? g2 : g1)(0, j) = -inv_n;
  }
  loss *= inv_n;
  if (!std::isfinite(loss)) throw NumericError("policy loss is not finite", policy.n_layers());

  Matrix gx = q1.backward(t1, g1, nullptr);
  if (q2) gx += q2->backward(t2, g2, nullptr);
  const Matrix g_action = gx.bottomRows(gx.rows() - s_dim);
  const Vector g_logp = Vector::Constant(n, alpha * inv_n);
  const Matrix g_out = draw.backward(g_action, g_logp);

  PolicyObjective res;
  res.loss = loss;
  res.mean_log_prob = draw.log_prob.mean();
  res.grads = nn::NetParams::zeros_like(policy.params());
  policy.backward(ptape, g_out, &res.grads);
  return res;
}

PolicyObjective deterministic_policy_objective(const nn::Mlp& policy, const nn::Mlp& q1, const Matrix& states) {
  const Eigen::Index n = states.cols();
  const Eigen::Index d = policy.spec().output_dim / 2;

  nn::Tape ptape;
  const Matrix pout = policy.forward(states, ptape);
  const Matrix a = pout.topRows(d).array().tanh().matrix();
  nn::Tape t1;
  const Matrix v1 = q1.forward(critic_input(states, a), t1);
  const double loss = -v1.mean();
  if (!std::isfinite(loss)) throw NumericError("policy loss is not finite", policy.n_layers());

  const Matrix gx = q1.backward(t1, Matrix::Constant(1, n, -1.0 / static_cast<double>(n)), nullptr);
  Matrix g_out = Matrix::Zero(pout.rows(), n);
  g_out.topRows(d) = (gx.bottomRows(d).array() * (1.0 - a.array().square())).matrix();

  PolicyObjective res;
  res.loss = loss;
  res.grads = nn::NetParams::zeros_like(policy.params());
  policy.backward(ptape, g_out, &res.grads);
  return res;
}

}  // namespace bee::agent
