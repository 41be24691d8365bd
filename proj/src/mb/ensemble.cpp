#include "bee/mb/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bee/agent/losses.hpp"
#include "bee/errors.hpp"

namespace bee::mb {

void EnsembleSpec::validate() const {
  if (obs_dim < 1 || act_dim < 1) throw ArgumentError("ensemble dims must be positive");
  if (k < 2) throw ArgumentError("ensemble needs at least two members");
  if (!(lr > 0.0)) throw ArgumentError("ensemble learning rate must be positive");
  if (batch_size < 1) throw ArgumentError("ensemble batch size must be >= 1");
}

DynamicsEnsemble::DynamicsEnsemble(EnsembleSpec spec, std::uint64_t seed) : spec_(std::move(spec)) {
  spec_.validate();
  const nn::NetSpec net{spec_.obs_dim + spec_.act_dim, 2 * (spec_.obs_dim + 1), spec_.hidden_sizes, spec_.activation};
  for (int i = 0; i < spec_.k; ++i) {
    Rng init(derive_seed(seed, static_cast<std::uint64_t>(i)));
    members_.emplace_back(net, init);
    opts_.push_back(nn::make_optim_state(members_.back().params(), spec_.lr));
    shuffles_.emplace_back(derive_seed(seed, 100 + static_cast<std::uint64_t>(i)));
  }
}

std::pair<Matrix, Matrix> model_dataset(const replay::ReplayBuffer& buffer) {
  if (buffer.empty()) throw StateError("cannot fit dynamics on an empty buffer");
  std::vector<int> all(buffer.size());
  std::iota(all.begin(), all.end(), 0);
  const auto b = buffer.gather(all);
  Matrix inputs = agent::critic_input(b.states, b.actions);
  Matrix targets(buffer.obs_dim() + 1, b.size());
  targets.topRows(buffer.obs_dim()) = b.next_states - b.states;
  targets.bottomRows(1) = b.rewards.transpose();
  return {std::move(inputs), std::move(targets)};
}

std::vector<double> DynamicsEnsemble::train(const replay::ReplayBuffer& buffer, int epochs) {
  const auto [x, y] = model_dataset(buffer);
  return train(x, y, epochs);
}

std::vector<double> DynamicsEnsemble::train(const Matrix& inputs, const Matrix& targets, int epochs) {
  const Eigen::Index n = inputs.cols();
  if (n == 0) throw StateError("cannot fit dynamics on an empty dataset");
  if (inputs.rows() != spec_.obs_dim + spec_.act_dim || targets.rows() != target_dim() || targets.cols() != n)
    throw ArgumentError("dynamics dataset has the wrong shape");
  std::vector<double> nll(members_.size(), 0.0);
  std::vector<int> order(n);
  for (std::size_t m = 0; m < members_.size(); ++m) {
    for (int e = 0; e < epochs; ++e) {
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), shuffles_[m]);
      double total = 0.0;
      int batches = 0;
      for (Eigen::Index start = 0; start < n; start += spec_.batch_size) {
        const Eigen::Index len = std::min<Eigen::Index>(spec_.batch_size, n - start);
        Matrix bx(inputs.rows(), len), by(targets.rows(), len);
        for (Eigen::Index j = 0; j < len; ++j) {
          bx.col(j) = inputs.col(order[start + j]);
          by.col(j) = targets.col(order[start + j]);
        }
        auto fb = nn::forward_backward(members_[m], bx, [&](const Matrix& out) { return agent::gaussian_nll(out, by); });
        nn::adam_step(members_[m].params(), fb.grads, opts_[m]);
        total += fb.loss;
        ++batches;
      }
      nll[m] = total / batches;
    }
  }
  return nll;
}

Matrix DynamicsEnsemble::member_output(int i, const Matrix& inputs) const { return members_.at(i).forward(inputs); }

Matrix DynamicsEnsemble::member_std(int i, const Matrix& inputs) const {
  const Matrix out = member_output(i, inputs);
  const Eigen::Index m = target_dim();
  return out.bottomRows(m).unaryExpr([](double lv) {
    return std::exp(0.5 * std::clamp(lv, agent::kLogVarMin, agent::kLogVarMax));
  });
}

Prediction DynamicsEnsemble::predict(const Matrix& states, const Matrix& actions) const {
  const Matrix x = agent::critic_input(states, actions);
  const Eigen::Index m = target_dim();
  Matrix mean = Matrix::Zero(m, x.cols());
  for (const auto& net : members_) mean += net.forward(x).topRows(m);
  mean /= static_cast<double>(members_.size());
  Prediction p;
  p.next_states = states + mean.topRows(spec_.obs_dim);
  p.rewards = mean.row(spec_.obs_dim).transpose();
  return p;
}

}  // namespace bee::mb
