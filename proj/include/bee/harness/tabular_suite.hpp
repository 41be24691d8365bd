#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bee::harness {

struct SuiteResult {
  std::string name;
  bool passed = true;
  long checks = 0;
  double worst = 0.0;   ///< largest violation margin seen (suite-specific units)
  std::string detail;   ///< first failure, if any
  double seconds = 0.0;
};

struct TabularSuiteConfig {
  int n_mdps = 50;
  int q_pairs = 100;
  int max_states = 10;
  int max_actions = 5;
  double gamma = 0.9;
  std::uint64_t seed = 2024;
};

/// ||B Q1 - B Q2||_inf <= gamma ||Q1 - Q2||_inf for every lambda on the grid.
SuiteResult contraction_suite(const TabularSuiteConfig& cfg);
/// Policy iteration with omega = 0 lands on Q* and never decreases entrywise.
SuiteResult optimality_suite(const TabularSuiteConfig& cfg);
/// lambda = 1 is the exploit backup, lambda = 0 the explore backup; full support exploit is T*.
SuiteResult reduction_suite(const TabularSuiteConfig& cfg);
/// Evaluation from two different starting tables reaches the same fixed point.
SuiteResult fixed_point_suite(const TabularSuiteConfig& cfg);

std::vector<SuiteResult> run_tabular_suites(const TabularSuiteConfig& cfg = {});

}  // namespace bee::harness
