#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bee::harness {

using Grid2d = std::vector<std::vector<double>>;

/// Min-max map to 0..255 (rounded); a constant grid maps to 128 everywhere.
std::vector<std::uint8_t> heatmap_pixels(const Grid2d& values);

/// Writes `<stem>.csv` and `<stem>.pgm` (binary P5, 8-bit). Row 0 is the top row of the image.
void emit_heatmap(const Grid2d& values, const std::string& stem);

}  // namespace bee::harness
