#pragma once

#include <cstddef>
#include <string>

#include "bee/agent/bac_agent.hpp"
#include "bee/harness/config.hpp"
#include "bee/replay/replay_buffer.hpp"

namespace bee::harness {

struct ScenarioOutcome {
  bool applied = false;
  std::size_t injected = 0;
  std::string warning;  ///< non-empty when the scenario degenerated to a no-op
};

/// Whether `scenario` fires at `step` (only the two in-run kinds ever do).
bool scenario_triggers(const Scenario& scenario, long step);

/**
 * Mutate the run at its trigger step.
 *   counteract_failure: every network (policy, critics, value) restarts from
 *     fresh seeds drawn from `reinit_seed`; the buffer is left alone.
 *   serendipity_injection: the trajectory file is appended to the buffer.
 * Other kinds, or a step that is not the trigger, change nothing.
 */
ScenarioOutcome scenario_apply(const Scenario& scenario, agent::BacAgent& agent, replay::ReplayBuffer& buffer,
                               long step, std::uint64_t reinit_seed);

}  // namespace bee::harness
