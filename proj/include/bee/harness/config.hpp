#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bee/agent/config.hpp"
#include "bee/env/environment.hpp"
#include "bee/mb/mb_bac.hpp"

namespace bee::harness {

enum class AgentKind { bac, mb_bac };
enum class ScenarioKind { none, serendipity_injection, counteract_failure, operator_comparison_grid, operator_comparison_particle };

std::string to_string(ScenarioKind k);
ScenarioKind scenario_kind_from_string(const std::string& s);

struct Scenario {
  ScenarioKind kind = ScenarioKind::none;
  long step = 0;                    ///< trigger step (injection / reinitialization)
  std::string trajectory_file;      ///< serendipity: replay file of transitions to inject
  std::vector<double> lambdas{0.0, 0.5, 1.0};   ///< grid comparison
  std::vector<int> checkpoints{100, 200, 500};  ///< particle comparison
  std::vector<std::string> operators{"bee", "standard"};
};

struct RunSettings {
  std::vector<std::uint64_t> seeds{1};
  long total_steps = 1000;
  long eval_every = 1000;
  int eval_episodes = 10;
  int mc_rollouts = 0;      ///< Monte-Carlo rollouts per evaluated pair; 0 disables the gap columns
  int mc_states = 10;       ///< evaluated (s, a) pairs per evaluation
  int delta_batch = 256;    ///< buffer batch for the delta estimate; 0 disables it
  int workers = 1;          ///< seeds run concurrently
};

struct ExperimentConfig {
  env::EnvSpec env = env::EnvSpec::point_mass_default();
  double noise_sigma = 0.0;
  AgentKind agent_kind = AgentKind::bac;
  agent::BacConfig agent;
  mb::MbConfig mb;
  RunSettings run;
  Scenario scenario;
  std::string output_dir = "runs/default";

  /// Every violated constraint, with its field path.
  std::vector<std::string> violations() const;
  void validate() const;
};

/// Parse and validate; unknown keys and bad values all end up in one ValidationError.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// Fully resolved config (defaults filled in), the canonical form that gets hashed.
nlohmann::json to_json(const ExperimentConfig& cfg);

/// FNV-1a 64 of the canonical JSON text, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace bee::harness
