#include "bee/env/particle_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "bee/errors.hpp"
#include "bee/mdp/solvers.hpp"

namespace bee::env {

int ParticleGrid::cell_of(double x, double y) const {
  const int c = std::clamp(static_cast<int>(std::floor(x / cell_size())), 0, resolution - 1);
  const int r = std::clamp(static_cast<int>(std::floor(y / cell_size())), 0, resolution - 1);
  return r * resolution + c;
}

double ParticleGrid::bin_angle(int bin) const {
  return -std::numbers::pi + 2.0 * std::numbers::pi * bin / angle_bins;
}

int ParticleGrid::angle_bin(double theta) const {
  const double two_pi = 2.0 * std::numbers::pi;
  double t = std::fmod(theta + std::numbers::pi, two_pi);
  if (t < 0) t += two_pi;
  return static_cast<int>(std::lround(t / two_pi * angle_bins)) % angle_bins;
}

bool ParticleGrid::hole_cell(int cell) const {
  return std::hypot(center_x(cell) - params.hole_x, center_y(cell) - params.hole_y) <= params.hole_radius;
}

std::vector<double> ParticleOracle::cell_values() const {
  std::vector<double> v(grid.n_cells());
  for (int c = 0; c < grid.n_cells(); ++c) {
    const auto row = q.row(c);
    v[c] = *std::max_element(row.begin(), row.end());
  }
  return v;
}

mdp::TabularMdp particle_mdp(const ParticleGrid& grid, double gamma) {
  if (grid.resolution < 10) throw ArgumentError("particle oracle resolution must be >= 10");
  const auto& p = grid.params;
  mdp::TabularMdp m(grid.n_states(), grid.angle_bins, gamma);
  m.make_terminal(grid.terminal_state());

  // lattice spacing <= 0.05 so sub-cell motion is resolved
  const int k = std::max(3, static_cast<int>(std::ceil(grid.cell_size() / 0.05 - 1e-9)));
  for (int cell = 0; cell < grid.n_cells(); ++cell) {
    if (grid.hole_cell(cell)) {
      for (int a = 0; a < grid.angle_bins; ++a) m.set_row(cell, a, {{grid.terminal_state(), 1.0}}, 1.0);
      continue;
    }
    const double x0 = grid.column(cell) * grid.cell_size();
    const double y0 = grid.row(cell) * grid.cell_size();
    for (int a = 0; a < grid.angle_bins; ++a) {
      const double th = grid.bin_angle(a);
      const double dx = p.move_length * std::cos(th);
      const double dy = p.move_length * std::sin(th);
      std::map<int, double> counts;
      double hits = 0.0;
      int n = 0;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
          const double x = x0 + (i + 0.5) / k * grid.cell_size();
          const double y = y0 + (j + 0.5) / k * grid.cell_size();
          if (std::hypot(x - p.hole_x, y - p.hole_y) <= p.hole_radius) continue;  // already absorbed
          ++n;
          const double nx = std::clamp(x + dx, 0.0, p.size);
          const double ny = std::clamp(y + dy, 0.0, p.size);
          if (std::hypot(nx - p.hole_x, ny - p.hole_y) <= p.hole_radius) {
            hits += 1.0;
            counts[grid.terminal_state()] += 1.0;
          } else {
            counts[grid.cell_of(nx, ny)] += 1.0;
          }
        }
      std::vector<mdp::Outcome> row;
      double acc = 0.0;
      for (auto it = counts.begin(); it != counts.end(); ++it) {
        const double prob = std::next(it) == counts.end() ? 1.0 - acc : it->second / n;
        row.push_back({it->first, prob});
        acc += prob;
      }
      m.set_row(cell, a, std::move(row), hits / n);
    }
  }
  return m;
}

ParticleOracle particle_oracle_q(int resolution, double gamma, double tol, const ParticleHoleParams& params) {
  ParticleGrid grid{resolution, kParticleAngleBins, params};
  auto m = particle_mdp(grid, gamma);
  auto q = mdp::value_iteration_oracle(m, tol);
  return {grid, std::move(m), std::move(q)};
}

}  // namespace bee::env
