#include "bee/harness/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "bee/errors.hpp"

namespace bee::harness {
namespace {

void check(const Grid2d& values) {
  if (values.empty() || values.front().empty()) throw ArgumentError("heatmap grid is empty");
  for (const auto& row : values) {
    if (row.size() != values.front().size()) throw ArgumentError("heatmap grid is not rectangular");
    for (double v : row)
      if (!std::isfinite(v)) throw ArgumentError("heatmap grid holds a non-finite value");
  }
}

}  // namespace

std::vector<std::uint8_t> heatmap_pixels(const Grid2d& values) {
  check(values);
  double lo = values[0][0], hi = values[0][0];
  for (const auto& row : values)
    for (double v : row) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  std::vector<std::uint8_t> px;
  for (const auto& row : values)
    for (double v : row)
      px.push_back(hi > lo ? static_cast<std::uint8_t>(std::lround(255.0 * (v - lo) / (hi - lo))) : 128);
  return px;
}

void emit_heatmap(const Grid2d& values, const std::string& stem) {
  const auto px = heatmap_pixels(values);
  std::ofstream csv(stem + ".csv");
  if (!csv) throw ArgumentError("cannot write " + stem + ".csv");
  csv.precision(17);
  for (const auto& row : values) {
    for (std::size_t j = 0; j < row.size(); ++j) csv << (j ? "," : "") << row[j];
    csv << "\n";
  }
  std::ofstream pgm(stem + ".pgm", std::ios::binary);
  if (!pgm) throw ArgumentError("cannot write " + stem + ".pgm");
  pgm << "P5\n" << values.front().size() << " " << values.size() << "\n255\n";
  pgm.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
}

}  // namespace bee::harness
