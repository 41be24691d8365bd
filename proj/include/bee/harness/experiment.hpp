#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bee/agent/trainer.hpp"
#include "bee/harness/config.hpp"

namespace bee::harness {

inline constexpr const char* kVersion = "0.1.0";
/// Environment variable that, when set, prefixes relative output directories.
inline constexpr const char* kOutputRootEnv = "BEE_OUTPUT_ROOT";

struct RunOptions {
  std::uint64_t seed_offset = 0;  ///< added to every configured seed (CI sharding)
  std::string output_root;        ///< empty: read kOutputRootEnv
  bool quiet = false;
};

struct SeedOutcome {
  std::uint64_t seed = 0;
  std::string csv;  ///< file name inside the output directory
  std::string status = "ok";
  std::string error;
  std::size_t injected = 0;
  long rows = 0;
  double wall_time_s = 0.0;
};

struct ExperimentResult {
  int exit_code = 0;
  std::string output_dir;
  std::string manifest;
  std::vector<SeedOutcome> seeds;
};

/// Resolved output directory for `cfg` under the options' root.
std::string resolve_output_dir(const ExperimentConfig& cfg, const RunOptions& opts);

/**
 * Evaluation row at `step`: deterministic-policy return and success rate,
 * then the optional diagnostics (Monte-Carlo gap over freshly reset states,
 * delta-hat over a buffer batch). Draws only from streams derived from
 * `diag_seed`, so adding rows never perturbs training.
 */
diag::RunRecord evaluation_row(const ExperimentConfig& cfg, const agent::BacAgent& agent,
                               const replay::ReplayBuffer& buffer, long step, std::uint64_t run_seed,
                               std::uint64_t eval_index);

/// Runs every seed and writes one CSV per seed plus manifest.json.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

}  // namespace bee::harness
