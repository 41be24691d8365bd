#include "bee/nn/mlp.hpp"

#include <cmath>

#include "bee/errors.hpp"

namespace bee::nn {
namespace {

void activate(Matrix& m, Activation a) {
  if (a == Activation::relu)
    m = m.cwiseMax(0.0);
  else
    m = m.array().tanh().matrix();
}

/// dL/dpre given dL/dpost and the pre-activation.
void activation_backward(Matrix& grad, const Matrix& pre, Activation a) {
  if (a == Activation::relu) {
    grad = (pre.array() > 0.0).select(grad, 0.0);
  } else {
    const auto t = pre.array().tanh();
    grad = (grad.array() * (1.0 - t * t)).matrix();
  }
}

bool finite(const Matrix& m) { return m.allFinite(); }

}  // namespace

std::string to_string(Activation a) { return a == Activation::relu ? "relu" : "tanh"; }

Activation activation_from_string(const std::string& s) {
  if (s == "relu") return Activation::relu;
  if (s == "tanh") return Activation::tanh;
  throw ArgumentError("unknown activation '" + s + "'");
}

void NetSpec::validate() const {
  if (input_dim < 1 || output_dim < 1) throw ArgumentError("network dims must be positive");
  for (int h : hidden_sizes)
    if (h < 1) throw ArgumentError("hidden sizes must be positive");
}

NetParams NetParams::zeros_like(const NetParams& other) {
  NetParams p;
  for (const auto& l : other.layers)
    p.layers.push_back({Matrix::Zero(l.weight.rows(), l.weight.cols()), Vector::Zero(l.bias.size())});
  return p;
}

std::size_t NetParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.weight.size() + l.bias.size();
  return n;
}

bool NetParams::all_finite() const { return first_non_finite_layer() < 0; }

int NetParams::first_non_finite_layer() const {
  for (std::size_t i = 0; i < layers.size(); ++i)
    if (!layers[i].weight.allFinite() || !layers[i].bias.allFinite()) return static_cast<int>(i);
  return -1;
}

double& NetParams::flat(std::size_t i) {
  for (auto& l : layers) {
    if (i < static_cast<std::size_t>(l.weight.size())) return l.weight.data()[i];
    i -= l.weight.size();
    if (i < static_cast<std::size_t>(l.bias.size())) return l.bias.data()[i];
    i -= l.bias.size();
  }
  throw ArgumentError("flat parameter index out of range");
}

double NetParams::flat(std::size_t i) const { return const_cast<NetParams*>(this)->flat(i); }

void NetParams::set_zero() {
  for (auto& l : layers) {
    l.weight.setZero();
    l.bias.setZero();
  }
}

Mlp::Mlp(NetSpec spec, Rng& rng) : spec_(std::move(spec)) {
  spec_.validate();
  int in = spec_.input_dim;
  auto add = [&](int out) {
    // uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)), the usual dense-layer default
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    Layer l{Matrix(out, in), Vector(out)};
    for (Eigen::Index i = 0; i < l.weight.size(); ++i) l.weight.data()[i] = uniform(rng, -bound, bound);
    for (Eigen::Index i = 0; i < l.bias.size(); ++i) l.bias[i] = uniform(rng, -bound, bound);
    params_.layers.push_back(std::move(l));
    in = out;
  };
  for (int h : spec_.hidden_sizes) add(h);
  add(spec_.output_dim);
}

Mlp::Mlp(NetSpec spec, NetParams params) : spec_(std::move(spec)), params_(std::move(params)) {
  spec_.validate();
  if (params_.layers.size() != spec_.hidden_sizes.size() + 1) throw ArgumentError("layer count does not match spec");
  int in = spec_.input_dim;
  for (std::size_t i = 0; i < params_.layers.size(); ++i) {
    const int out = i < spec_.hidden_sizes.size() ? spec_.hidden_sizes[i] : spec_.output_dim;
    const auto& l = params_.layers[i];
    if (l.weight.rows() != out || l.weight.cols() != in || l.bias.size() != out)
      throw ArgumentError("layer " + std::to_string(i) + " shape does not match spec");
    in = out;
  }
}

Matrix Mlp::forward(const Matrix& x) const {
  if (x.rows() != spec_.input_dim) throw ArgumentError("network input has wrong dimension");
  Matrix h = x;
  for (int i = 0; i < n_layers(); ++i) {
    const auto& l = params_.layers[i];
    Matrix z = l.weight * h;
    z.colwise() += l.bias;
    if (i + 1 < n_layers()) activate(z, spec_.activation);
    h = std::move(z);
  }
  return h;
}

Matrix Mlp::forward(const Matrix& x, Tape& tape) const {
  if (x.rows() != spec_.input_dim) throw ArgumentError("network input has wrong dimension");
  tape.inputs.resize(n_layers());
  tape.pre.resize(n_layers() - 1);
  Matrix h = x;
  for (int i = 0; i < n_layers(); ++i) {
    const auto& l = params_.layers[i];
    Matrix z = l.weight * h;
    z.colwise() += l.bias;
    tape.inputs[i] = std::move(h);
    if (i + 1 < n_layers()) {
      tape.pre[i] = z;
      activate(z, spec_.activation);
    }
    h = std::move(z);
  }
  return h;
}

Matrix Mlp::backward(const Tape& tape, const Matrix& grad_output, NetParams* grads) const {
  Matrix delta = grad_output;
  for (int i = n_layers() - 1; i >= 0; --i) {
    const auto& l = params_.layers[i];
    if (grads) {
      grads->layers[i].weight.noalias() += delta * tape.inputs[i].transpose();
      grads->layers[i].bias.noalias() += delta.rowwise().sum();
    }
    Matrix below = l.weight.transpose() * delta;
    if (i > 0) activation_backward(below, tape.pre[i - 1], spec_.activation);
    delta = std::move(below);
  }
  return delta;
}

ForwardBackward forward_backward(const Mlp& net, const Matrix& inputs, const LossFn& loss_fn) {
  if (!finite(inputs)) throw NumericError("non-finite network input", 0);
  Tape tape;
  const Matrix out = net.forward(inputs, tape);
  LossValue lv = loss_fn(out);
  if (!std::isfinite(lv.loss) || !lv.grad.allFinite()) {
    int layer = net.n_layers();  // every layer finite: the loss itself diverged
    for (int i = 0; i < net.n_layers(); ++i) {
      const Matrix& produced = i + 1 < net.n_layers() ? tape.inputs[i + 1] : out;
      if (!finite(produced)) {
        layer = i;
        break;
      }
    }
    throw NumericError("non-finite loss (layer " + std::to_string(layer) + ")", layer);
  }
  ForwardBackward fb{lv.loss, NetParams::zeros_like(net.params())};
  net.backward(tape, lv.grad, &fb.grads);
  return fb;
}

void polyak_update(NetParams& target, const NetParams& online, double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw ArgumentError("polyak rho must lie in [0,1]");
  if (target.layers.size() != online.layers.size()) throw ArgumentError("polyak shape mismatch");
  for (std::size_t i = 0; i < target.layers.size(); ++i) {
    auto& t = target.layers[i];
    const auto& o = online.layers[i];
    if (t.weight.rows() != o.weight.rows() || t.weight.cols() != o.weight.cols() || t.bias.size() != o.bias.size())
      throw ArgumentError("polyak shape mismatch");
    t.weight = (1.0 - rho) * t.weight + rho * o.weight;
    t.bias = (1.0 - rho) * t.bias + rho * o.bias;
  }
}

}  // namespace bee::nn
