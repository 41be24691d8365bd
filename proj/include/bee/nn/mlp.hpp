#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bee/random.hpp"

namespace bee::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Activation { relu, tanh };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& s);

struct NetSpec {
  int input_dim = 1;
  int output_dim = 1;
  std::vector<int> hidden_sizes{256, 256};
  Activation activation = Activation::relu;

  void validate() const;
  bool operator==(const NetSpec&) const = default;
};

/// Dense layer y = W x + b; W is out x in.
struct Layer {
  Matrix weight;
  Vector bias;
};

/// Per-layer tensors. Doubles as the gradient and Adam-moment container.
struct NetParams {
  std::vector<Layer> layers;

  static NetParams zeros_like(const NetParams& other);
  std::size_t parameter_count() const;
  bool all_finite() const;
  /// Index of the first layer holding a non-finite value, or -1.
  int first_non_finite_layer() const;
  /// Flat view in declaration order (layer 0 weight column-major, layer 0 bias, layer 1 ...).
  double& flat(std::size_t i);
  double flat(std::size_t i) const;
  void set_zero();
};

/// Values saved by a forward pass for the reverse sweep.
struct Tape {
  std::vector<Matrix> inputs;  ///< input to each layer
  std::vector<Matrix> pre;     ///< pre-activation output of each hidden layer
};

/**
 * Multi-layer perceptron, one column per sample. Hidden layers use the
 * spec's activation; the output layer is linear.
 */
class Mlp {
 public:
  Mlp() = default;
  Mlp(NetSpec spec, Rng& rng);
  Mlp(NetSpec spec, NetParams params);

  const NetSpec& spec() const { return spec_; }
  NetParams& params() { return params_; }
  const NetParams& params() const { return params_; }
  int n_layers() const { return static_cast<int>(params_.layers.size()); }

  Matrix forward(const Matrix& x) const;
  Matrix forward(const Matrix& x, Tape& tape) const;

  /**
   * Reverse sweep from dL/d(output). Accumulates parameter gradients into
   * `grads` when non-null and returns dL/d(input).
   */
  Matrix backward(const Tape& tape, const Matrix& grad_output, NetParams* grads) const;

 private:
  NetSpec spec_;
  NetParams params_;
};

/// A scalar loss of the network output together with its gradient.
struct LossValue {
  double loss = 0.0;
  Matrix grad;  ///< dL/d(output), same shape as the output
};
using LossFn = std::function<LossValue(const Matrix& output)>;

struct ForwardBackward {
  double loss = 0.0;
  NetParams grads;
};

/// Forward, evaluate `loss_fn`, reverse sweep. Throws NumericError (with layer index) on a non-finite loss.
ForwardBackward forward_backward(const Mlp& net, const Matrix& inputs, const LossFn& loss_fn);

/// target <- (1 - rho) target + rho online.
void polyak_update(NetParams& target, const NetParams& online, double rho);

}  // namespace bee::nn
