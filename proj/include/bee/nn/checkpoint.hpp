#pragma once

#include <string>

#include "bee/nn/mlp.hpp"

namespace bee::nn {

/**
 * Flat binary network file: "BEENET\0\0", u32 version, u32 input_dim,
 * u32 output_dim, u32 activation, u32 hidden count, u32 hidden sizes...,
 * then each layer's weight (row-major) and bias as little-endian f64.
 */
void save_checkpoint(const std::string& path, const Mlp& net);
Mlp load_checkpoint(const std::string& path);

}  // namespace bee::nn
