#include "bee/nn/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "bee/errors.hpp"

namespace bee::nn {
namespace {

static_assert(std::endian::native == std::endian::little, "checkpoint format assumes a little-endian host");

constexpr char kMagic[8] = {'B', 'E', 'E', 'N', 'E', 'T', 0, 0};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& f, std::uint32_t v) { f.write(reinterpret_cast<const char*>(&v), 4); }

std::uint32_t get_u32(std::istream& f) {
  std::uint32_t v = 0;
  if (!f.read(reinterpret_cast<char*>(&v), 4)) throw ArgumentError("truncated checkpoint header");
  return v;
}

void put_f64(std::ostream& f, double v) { f.write(reinterpret_cast<const char*>(&v), 8); }

double get_f64(std::istream& f) {
  double v = 0;
  if (!f.read(reinterpret_cast<char*>(&v), 8)) throw ArgumentError("truncated checkpoint tensor");
  return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const Mlp& net) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ArgumentError("cannot write " + path);
  const auto& spec = net.spec();
  f.write(kMagic, 8);
  put_u32(f, kVersion);
  put_u32(f, static_cast<std::uint32_t>(spec.input_dim));
  put_u32(f, static_cast<std::uint32_t>(spec.output_dim));
  put_u32(f, spec.activation == Activation::relu ? 0u : 1u);
  put_u32(f, static_cast<std::uint32_t>(spec.hidden_sizes.size()));
  for (int h : spec.hidden_sizes) put_u32(f, static_cast<std::uint32_t>(h));
  for (const auto& l : net.params().layers) {
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) put_f64(f, l.weight(r, c));
    for (Eigen::Index i = 0; i < l.bias.size(); ++i) put_f64(f, l.bias[i]);
  }
}

Mlp load_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ArgumentError("cannot read " + path);
  char magic[8];
  if (!f.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) throw ArgumentError(path + ": not a network checkpoint");
  if (get_u32(f) != kVersion) throw ArgumentError(path + ": unsupported checkpoint version");
  NetSpec spec;
  spec.input_dim = static_cast<int>(get_u32(f));
  spec.output_dim = static_cast<int>(get_u32(f));
  spec.activation = get_u32(f) == 0 ? Activation::relu : Activation::tanh;
  spec.hidden_sizes.resize(get_u32(f));
  for (auto& h : spec.hidden_sizes) h = static_cast<int>(get_u32(f));
  spec.validate();
  NetParams params;
  int in = spec.input_dim;
  for (std::size_t i = 0; i <= spec.hidden_sizes.size(); ++i) {
    const int out = i < spec.hidden_sizes.size() ? spec.hidden_sizes[i] : spec.output_dim;
    Layer l{Matrix(out, in), Vector(out)};
    for (int r = 0; r < out; ++r)
      for (int c = 0; c < in; ++c) l.weight(r, c) = get_f64(f);
    for (int r = 0; r < out; ++r) l.bias[r] = get_f64(f);
    params.layers.push_back(std::move(l));
    in = out;
  }
  return Mlp(spec, std::move(params));
}

}  // namespace bee::nn
