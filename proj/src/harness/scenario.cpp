#include "bee/harness/scenario.hpp"

#include <filesystem>
#include <iostream>

#include "bee/errors.hpp"

namespace bee::harness {

bool scenario_triggers(const Scenario& scenario, long step) {
  return (scenario.kind == ScenarioKind::counteract_failure || scenario.kind == ScenarioKind::serendipity_injection) &&
         scenario.step == step;
}

ScenarioOutcome scenario_apply(const Scenario& scenario, agent::BacAgent& agent, replay::ReplayBuffer& buffer,
                               long step, std::uint64_t reinit_seed) {
  ScenarioOutcome out;
  if (!scenario_triggers(scenario, step)) return out;

  if (scenario.kind == ScenarioKind::counteract_failure) {
    agent.reinitialize_networks(reinit_seed);
    out.applied = true;
    return out;
  }

  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::exists(scenario.trajectory_file, ec) || fs::file_size(scenario.trajectory_file, ec) == 0) {
    out.warning = "trajectory file '" + scenario.trajectory_file + "' is missing or empty; nothing injected";
  } else {
    auto transitions = replay::ReplayBuffer::load_transitions(scenario.trajectory_file);
    if (transitions.empty())
      out.warning = "trajectory file '" + scenario.trajectory_file + "' holds no transitions; nothing injected";
    else
      out.injected = buffer.inject_trajectories({std::move(transitions)});
  }
  if (!out.warning.empty()) std::cerr << "warning: " << out.warning << '\n';
  out.applied = out.injected > 0;
  return out;
}

}  // namespace bee::harness
