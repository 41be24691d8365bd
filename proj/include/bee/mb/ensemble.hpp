#pragma once

#include <cstdint>
#include <vector>

#include "bee/nn/adam.hpp"
#include "bee/nn/mlp.hpp"
#include "bee/replay/replay_buffer.hpp"

namespace bee::mb {

using nn::Matrix;
using nn::Vector;

struct EnsembleSpec {
  int obs_dim = 1;
  int act_dim = 1;
  int k = 5;
  std::vector<int> hidden_sizes{128, 128};
  nn::Activation activation = nn::Activation::relu;
  double lr = 1e-3;
  int batch_size = 256;

  void validate() const;
};

struct Prediction {
  Matrix next_states;  ///< obs_dim x n: s + mean predicted delta
  Vector rewards;      ///< n
};

/**
 * K Gaussian dynamics models on (s, a) -> (delta s, r). Each member outputs
 * means over log-variances and is fitted by NLL on its own shuffle of the
 * shared data.
 */
class DynamicsEnsemble {
 public:
  DynamicsEnsemble(EnsembleSpec spec, std::uint64_t seed);

  const EnsembleSpec& spec() const { return spec_; }
  int size() const { return static_cast<int>(members_.size()); }
  int target_dim() const { return spec_.obs_dim + 1; }

  /// `epochs` passes over the buffer per member; returns each member's mean NLL over its last pass.
  std::vector<double> train(const replay::ReplayBuffer& buffer, int epochs);
  /// Same on explicit (s;a) inputs and (delta s; r) targets.
  std::vector<double> train(const Matrix& inputs, const Matrix& targets, int epochs);

  /// Arithmetic mean of the member means.
  Prediction predict(const Matrix& states, const Matrix& actions) const;
  /// Raw output of member i: means over clamped-at-loss log-variances.
  Matrix member_output(int i, const Matrix& inputs) const;
  /// Predicted standard deviation of member i (log-variance clamped to [-10, 4]).
  Matrix member_std(int i, const Matrix& inputs) const;

  std::vector<nn::Mlp>& members() { return members_; }
  const std::vector<nn::Mlp>& members() const { return members_; }

 private:
  EnsembleSpec spec_;
  std::vector<nn::Mlp> members_;
  std::vector<nn::OptimState> opts_;
  std::vector<Rng> shuffles_;
};

/// (s; a) inputs and (s' - s; r) targets of every stored transition.
std::pair<Matrix, Matrix> model_dataset(const replay::ReplayBuffer& buffer);

}  // namespace bee::mb
