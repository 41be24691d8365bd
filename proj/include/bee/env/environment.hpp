#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "bee/random.hpp"

namespace bee::env {

enum class EnvKind { grid_maze, particle_hole, point_mass };
enum class RewardMode { dense, sparse };

struct ActionSpace {
  enum class Kind { discrete, box } kind = Kind::box;
  int n = 0;                ///< discrete only
  std::vector<double> low;  ///< box only
  std::vector<double> high;

  static ActionSpace discrete(int n);
  static ActionSpace box(std::vector<double> low, std::vector<double> high);

  bool is_box() const { return kind == Kind::box; }
  /// Number of real components an action vector carries (1 for discrete).
  int dim() const { return is_box() ? static_cast<int>(low.size()) : 1; }
};

struct GridMazeParams {
  std::string layout;  ///< empty: built-in 8x8 map
  double gamma = 0.95;
};

struct ParticleHoleParams {
  double size = 10.0;
  double hole_x = 10.0;
  double hole_y = 5.0;
  double hole_radius = 0.1;
  double move_length = 0.1;
  /// Spawn rectangle; defaults to the whole box.
  double spawn_x_low = 0.0, spawn_x_high = 10.0;
  double spawn_y_low = 0.0, spawn_y_high = 10.0;
};

struct PointMassParams {
  double dt = 0.05;
  double friction = 0.1;
  double arena = 0.5;      ///< positions live in [-arena, arena]^2
  double max_speed = 2.0;  ///< velocities clipped to [-max_speed, max_speed]
  double goal_x = 0.0;
  double goal_y = 0.0;
  double goal_radius = 0.1;
  double min_start_distance = 0.3;
};

/// Everything needed to construct an environment.
struct EnvSpec {
  EnvKind kind = EnvKind::point_mass;
  int horizon = 200;
  RewardMode reward_mode = RewardMode::dense;
  ActionSpace action_space;
  int observation_dim = 0;
  std::vector<double> observation_low;
  std::vector<double> observation_high;

  GridMazeParams grid;
  ParticleHoleParams particle;
  PointMassParams point_mass;

  static EnvSpec grid_maze_default();
  static EnvSpec particle_hole_default();
  static EnvSpec point_mass_default(RewardMode mode = RewardMode::dense);

  void validate() const;
};

struct StepResult {
  std::vector<double> observation;
  double reward = 0.0;
  bool terminated = false;
  bool truncated = false;
  bool success = false;
  bool action_clipped = false;
};

/**
 * Single-threaded environment with an explicit seeded stream.
 *
 * Actions are real vectors; discrete environments read the index from
 * component 0. All built-in environments support state injection, which
 * Monte-Carlo diagnostics and model rollouts rely on.
 */
class Environment {
 public:
  virtual ~Environment() = default;

  virtual const EnvSpec& spec() const = 0;
  virtual std::vector<double> reset() = 0;
  virtual StepResult step(std::span<const double> action) = 0;

  virtual bool supports_state_injection() const { return true; }
  /// Full simulator state (for the built-ins this equals the observation).
  virtual std::vector<double> state() const = 0;
  /// Place the simulator in `state`; clears termination and restarts the horizon counter.
  virtual void set_state(std::span<const double> state) = 0;

  /// Analytic success / terminal predicate on an observation; used by model rollouts.
  virtual bool is_terminal_observation(std::span<const double> observation) const = 0;
  /// Reward the environment would pay for landing in `observation`.
  virtual double reward_for_observation(std::span<const double> observation) const = 0;

  virtual std::unique_ptr<Environment> clone() const = 0;

  int elapsed_steps() const { return elapsed_; }
  bool done() const { return done_; }

  StepResult step(std::initializer_list<double> action) { return step(std::span<const double>(action.begin(), action.size())); }

 protected:
  /// Enforces the step contract shared by all environments.
  void begin_step();
  void finish_step(StepResult& result);

  int elapsed_ = 0;
  bool done_ = true;
};

/// Builds any built-in environment from its spec.
std::unique_ptr<Environment> make_env(const EnvSpec& spec, std::uint64_t seed);

/// Clip `action` into a box; returns true if any component moved.
bool clip_to_box(std::vector<double>& action, const ActionSpace& space);

std::string to_string(EnvKind kind);
EnvKind env_kind_from_string(const std::string& s);
std::string to_string(RewardMode mode);
RewardMode reward_mode_from_string(const std::string& s);

}  // namespace bee::env
