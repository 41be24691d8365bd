#include "bee/harness/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "bee/errors.hpp"

namespace bee::harness {

using nlohmann::json;

std::string to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::none: return "none";
    case ScenarioKind::serendipity_injection: return "serendipity_injection";
    case ScenarioKind::counteract_failure: return "counteract_failure";
    case ScenarioKind::operator_comparison_grid: return "operator_comparison_grid";
    case ScenarioKind::operator_comparison_particle: return "operator_comparison_particle";
  }
  return "?";
}

ScenarioKind scenario_kind_from_string(const std::string& s) {
  for (auto k : {ScenarioKind::none, ScenarioKind::serendipity_injection, ScenarioKind::counteract_failure,
                 ScenarioKind::operator_comparison_grid, ScenarioKind::operator_comparison_particle})
    if (to_string(k) == s) return k;
  throw ArgumentError("unknown scenario kind '" + s + "'");
}

namespace {

// Reads one JSON object, remembering which keys were consumed and every type error on the way.
class Section {
 public:
  Section(const json& j, std::string path, std::vector<std::string>& errors) : j_(j), path_(std::move(path)), errors_(errors) {
    if (!j_.is_object()) errors_.push_back(path_ + " must be an object");
  }

  ~Section() {
    if (!j_.is_object()) return;
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) errors_.push_back(path_ + "." + it.key() + " is not a known field");
  }

  template <class T>
  void get(const std::string& key, T& out) {
    seen_.insert(key);
    if (!j_.is_object() || !j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      errors_.push_back(path_ + "." + key + " has the wrong type");
    }
  }

  // Enum-like field parsed through a string conversion.
  template <class T, class F>
  void get_enum(const std::string& key, T& out, F from_string) {
    std::string s;
    seen_.insert(key);
    if (!j_.is_object() || !j_.contains(key)) return;
    get(key, s);
    if (!j_.at(key).is_string()) return;
    try {
      out = from_string(s);
    } catch (const std::exception&) {
      errors_.push_back(path_ + "." + key + " has unknown value '" + s + "'");
    }
  }

  const json* child(const std::string& key) {
    seen_.insert(key);
    if (!j_.is_object() || !j_.contains(key)) return nullptr;
    return &j_.at(key);
  }

  std::string path(const std::string& key) const { return path_ + "." + key; }

 private:
  const json& j_;
  std::string path_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
};

void refresh_observation_bounds(env::EnvSpec& s) {
  if (s.kind == env::EnvKind::point_mass) {
    const double a = s.point_mass.arena, v = s.point_mass.max_speed;
    s.observation_low = {-a, -a, -v, -v};
    s.observation_high = {a, a, v, v};
  } else if (s.kind == env::EnvKind::particle_hole) {
    s.observation_low = {0.0, 0.0};
    s.observation_high = {s.particle.size, s.particle.size};
  }
}

env::EnvSpec default_spec(env::EnvKind kind, env::RewardMode mode) {
  switch (kind) {
    case env::EnvKind::grid_maze: return env::EnvSpec::grid_maze_default();
    case env::EnvKind::particle_hole: return env::EnvSpec::particle_hole_default();
    case env::EnvKind::point_mass: return env::EnvSpec::point_mass_default(mode);
  }
  return env::EnvSpec::point_mass_default(mode);
}

void read_env(const json& j, ExperimentConfig& cfg, std::vector<std::string>& errors) {
  Section s(j, "env", errors);
  env::EnvKind kind = env::EnvKind::point_mass;
  env::RewardMode mode = env::RewardMode::dense;
  s.get_enum("kind", kind, env::env_kind_from_string);
  s.get_enum("reward_mode", mode, env::reward_mode_from_string);
  cfg.env = default_spec(kind, mode);
  cfg.env.reward_mode = mode;
  s.get("horizon", cfg.env.horizon);
  s.get("noise_sigma", cfg.noise_sigma);
  if (const json* g = s.child("grid_maze")) {
    Section gs(*g, s.path("grid_maze"), errors);
    gs.get("layout", cfg.env.grid.layout);
    gs.get("gamma", cfg.env.grid.gamma);
  }
  if (const json* p = s.child("particle_hole")) {
    Section ps(*p, s.path("particle_hole"), errors);
    auto& q = cfg.env.particle;
    ps.get("size", q.size);
    ps.get("hole_x", q.hole_x);
    ps.get("hole_y", q.hole_y);
    ps.get("hole_radius", q.hole_radius);
    ps.get("move_length", q.move_length);
    ps.get("spawn_x_low", q.spawn_x_low);
    ps.get("spawn_x_high", q.spawn_x_high);
    ps.get("spawn_y_low", q.spawn_y_low);
    ps.get("spawn_y_high", q.spawn_y_high);
  }
  if (const json* p = s.child("point_mass")) {
    Section ps(*p, s.path("point_mass"), errors);
    auto& q = cfg.env.point_mass;
    ps.get("dt", q.dt);
    ps.get("friction", q.friction);
    ps.get("arena", q.arena);
    ps.get("max_speed", q.max_speed);
    ps.get("goal_x", q.goal_x);
    ps.get("goal_y", q.goal_y);
    ps.get("goal_radius", q.goal_radius);
    ps.get("min_start_distance", q.min_start_distance);
  }
  refresh_observation_bounds(cfg.env);
}

void read_agent(const json& j, ExperimentConfig& cfg, std::vector<std::string>& errors) {
  Section s(j, "agent", errors);
  auto& a = cfg.agent;
  std::string type = "bac";
  s.get("type", type);
  if (type == "bac")
    cfg.agent_kind = AgentKind::bac;
  else if (type == "mb_bac")
    cfg.agent_kind = AgentKind::mb_bac;
  else
    errors.push_back("agent.type has unknown value '" + type + "'");
  s.get("lambda", a.lambda);
  s.get_enum("lambda_mode", a.lambda_mode, agent::lambda_mode_from_string);
  s.get("expectile_tau", a.expectile_tau);
  s.get_enum("value_loss", a.value_loss, agent::value_loss_from_string);
  s.get("value_alpha", a.value_alpha);
  if (const json* e = s.child("ent_target")) {
    if (e->is_number())
      a.ent_target = e->get<double>();
    else if (!e->is_null())
      errors.push_back("agent.ent_target has the wrong type");
  }
  s.get("lr", a.lr);
  s.get("batch_size", a.batch_size);
  s.get("gamma", a.gamma);
  s.get("polyak_rho", a.polyak_rho);
  s.get("warmup_transitions", a.warmup_transitions);
  s.get("double_q", a.double_q);
  s.get_enum("explore_variant", a.explore_variant, agent::explore_variant_from_string);
  s.get("smoothing_sigma", a.smoothing_sigma);
  s.get("smoothing_clip", a.smoothing_clip);
  s.get("exploration_noise", a.exploration_noise);
  s.get("init_alpha", a.init_alpha);
  s.get("learn_alpha", a.learn_alpha);
  s.get("ada_decay", a.ada_decay);
  s.get("buffer_capacity", a.buffer_capacity);
  s.get("hidden_sizes", a.hidden_sizes);
  s.get_enum("activation", a.activation, nn::activation_from_string);
  if (const json* m = s.child("mb")) {
    Section ms(*m, s.path("mb"), errors);
    auto& mb = cfg.mb;
    ms.get("k_ensemble", mb.k_ensemble);
    if (const json* r = ms.child("rollout_schedule")) {
      Section rs(*r, ms.path("rollout_schedule"), errors);
      rs.get("x", mb.rollout_schedule.x);
      rs.get("y", mb.rollout_schedule.y);
      rs.get("a", mb.rollout_schedule.a);
      rs.get("b", mb.rollout_schedule.b);
    }
    ms.get("rollouts_per_update", mb.rollouts_per_update);
    ms.get("model_train_epochs", mb.model_train_epochs);
    ms.get("real_buffer_capacity", mb.real_buffer_capacity);
    ms.get("model_buffer_capacity", mb.model_buffer_capacity);
    ms.get("steps_per_epoch", mb.steps_per_epoch);
    ms.get("updates_per_epoch", mb.updates_per_epoch);
    ms.get("model_hidden", mb.model_hidden);
    ms.get("model_lr", mb.model_lr);
    ms.get("model_batch_size", mb.model_batch_size);
  }
}

void read_run(const json& j, ExperimentConfig& cfg, std::vector<std::string>& errors) {
  Section s(j, "run", errors);
  auto& r = cfg.run;
  s.get("seeds", r.seeds);
  s.get("total_steps", r.total_steps);
  s.get("eval_every", r.eval_every);
  s.get("eval_episodes", r.eval_episodes);
  s.get("mc_rollouts", r.mc_rollouts);
  s.get("mc_states", r.mc_states);
  s.get("delta_batch", r.delta_batch);
  s.get("workers", r.workers);
}

void read_scenario(const json& j, ExperimentConfig& cfg, std::vector<std::string>& errors) {
  Section s(j, "scenario", errors);
  auto& sc = cfg.scenario;
  s.get_enum("kind", sc.kind, scenario_kind_from_string);
  s.get("step", sc.step);
  s.get("trajectory_file", sc.trajectory_file);
  s.get("lambdas", sc.lambdas);
  s.get("checkpoints", sc.checkpoints);
  s.get("operators", sc.operators);
}

}  // namespace

std::vector<std::string> ExperimentConfig::violations() const {
  std::vector<std::string> v;
  try {
    env.validate();
  } catch (const std::exception& e) {
    v.push_back(std::string("env: ") + e.what());
  }
  if (!(noise_sigma >= 0.0)) v.push_back("env.noise_sigma must be >= 0");
  for (auto& m : agent.violations()) v.push_back(m);
  if (agent_kind == AgentKind::mb_bac) {
    for (auto& m : mb.violations()) v.push_back("agent." + m);
    if (noise_sigma > 0.0) v.push_back("env.noise_sigma is only supported with agent.type bac");
  }
  if (run.seeds.empty()) v.push_back("run.seeds must be non-empty");
  if (run.eval_every < 1) v.push_back("run.eval_every must be >= 1");
  if (run.total_steps < run.eval_every) v.push_back("run.total_steps must be >= run.eval_every");
  if (run.eval_episodes < 1) v.push_back("run.eval_episodes must be >= 1");
  if (run.mc_rollouts < 0) v.push_back("run.mc_rollouts must be >= 0");
  if (run.mc_states < 1) v.push_back("run.mc_states must be >= 1");
  if (run.delta_batch < 0) v.push_back("run.delta_batch must be >= 0");
  if (run.workers < 1) v.push_back("run.workers must be >= 1");

  const bool comparison = scenario.kind == ScenarioKind::operator_comparison_grid ||
                          scenario.kind == ScenarioKind::operator_comparison_particle;
  if (!comparison && !env.action_space.is_box()) v.push_back("env.kind needs a continuous action space for agent runs");
  if (scenario.kind == ScenarioKind::serendipity_injection || scenario.kind == ScenarioKind::counteract_failure) {
    if (scenario.step < 0 || scenario.step > run.total_steps)
      v.push_back("scenario.step must lie within [0, run.total_steps]");
  }
  if (scenario.kind == ScenarioKind::serendipity_injection && scenario.trajectory_file.empty())
    v.push_back("scenario.trajectory_file is required for serendipity_injection");
  if (scenario.kind == ScenarioKind::counteract_failure && agent_kind != AgentKind::bac)
    v.push_back("scenario.kind counteract_failure needs agent.type bac");
  if (scenario.kind == ScenarioKind::serendipity_injection && agent_kind != AgentKind::bac)
    v.push_back("scenario.kind serendipity_injection needs agent.type bac");
  if (scenario.kind == ScenarioKind::operator_comparison_grid) {
    if (scenario.lambdas.empty()) v.push_back("scenario.lambdas must be non-empty");
    for (double l : scenario.lambdas)
      if (!(l >= 0.0 && l <= 1.0)) {
        v.push_back("scenario.lambdas entries must lie in [0, 1]");
        break;
      }
  }
  if (scenario.kind == ScenarioKind::operator_comparison_particle) {
    if (scenario.checkpoints.empty()) v.push_back("scenario.checkpoints must be non-empty");
    for (int c : scenario.checkpoints)
      if (c < 1) {
        v.push_back("scenario.checkpoints entries must be >= 1");
        break;
      }
    for (auto& op : scenario.operators)
      if (op != "bee" && op != "standard") v.push_back("scenario.operators has unknown operator '" + op + "'");
  }
  if (output_dir.empty()) v.push_back("output_dir must be non-empty");
  return v;
}

void ExperimentConfig::validate() const {
  auto v = violations();
  if (!v.empty()) throw ValidationError(std::move(v));
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig cfg;
  std::vector<std::string> errors;
  {
    Section top(j, "config", errors);
    if (const json* e = top.child("env")) read_env(*e, cfg, errors);
    if (const json* a = top.child("agent")) read_agent(*a, cfg, errors);
    if (const json* r = top.child("run")) read_run(*r, cfg, errors);
    if (const json* s = top.child("scenario")) read_scenario(*s, cfg, errors);
    top.get("output_dir", cfg.output_dir);
  }
  for (auto& m : cfg.violations()) errors.push_back(m);
  if (!errors.empty()) throw ValidationError(std::move(errors));
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open config '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError({std::string("config is not valid JSON: ") + e.what()});
  }
  return config_from_json(j);
}

json to_json(const ExperimentConfig& c) {
  const auto& e = c.env;
  json env = {{"kind", env::to_string(e.kind)},
              {"reward_mode", env::to_string(e.reward_mode)},
              {"horizon", e.horizon},
              {"noise_sigma", c.noise_sigma}};
  switch (e.kind) {
    case env::EnvKind::grid_maze:
      env["grid_maze"] = {{"layout", e.grid.layout}, {"gamma", e.grid.gamma}};
      break;
    case env::EnvKind::particle_hole: {
      const auto& p = e.particle;
      env["particle_hole"] = {{"size", p.size},           {"hole_x", p.hole_x},
                              {"hole_y", p.hole_y},       {"hole_radius", p.hole_radius},
                              {"move_length", p.move_length}, {"spawn_x_low", p.spawn_x_low},
                              {"spawn_x_high", p.spawn_x_high}, {"spawn_y_low", p.spawn_y_low},
                              {"spawn_y_high", p.spawn_y_high}};
      break;
    }
    case env::EnvKind::point_mass: {
      const auto& p = e.point_mass;
      env["point_mass"] = {{"dt", p.dt},         {"friction", p.friction},       {"arena", p.arena},
                           {"max_speed", p.max_speed}, {"goal_x", p.goal_x},   {"goal_y", p.goal_y},
                           {"goal_radius", p.goal_radius}, {"min_start_distance", p.min_start_distance}};
      break;
    }
  }
  const auto& a = c.agent;
  json agent = {{"type", c.agent_kind == AgentKind::bac ? "bac" : "mb_bac"},
                {"lambda", a.lambda},
                {"lambda_mode", agent::to_string(a.lambda_mode)},
                {"expectile_tau", a.expectile_tau},
                {"value_loss", agent::to_string(a.value_loss)},
                {"value_alpha", a.value_alpha},
                {"ent_target", a.ent_target ? json(*a.ent_target) : json(nullptr)},
                {"lr", a.lr},
                {"batch_size", a.batch_size},
                {"gamma", a.gamma},
                {"polyak_rho", a.polyak_rho},
                {"warmup_transitions", a.warmup_transitions},
                {"double_q", a.double_q},
                {"explore_variant", agent::to_string(a.explore_variant)},
                {"smoothing_sigma", a.smoothing_sigma},
                {"smoothing_clip", a.smoothing_clip},
                {"exploration_noise", a.exploration_noise},
                {"init_alpha", a.init_alpha},
                {"learn_alpha", a.learn_alpha},
                {"ada_decay", a.ada_decay},
                {"buffer_capacity", a.buffer_capacity},
                {"hidden_sizes", a.hidden_sizes},
                {"activation", nn::to_string(a.activation)}};
  if (c.agent_kind == AgentKind::mb_bac) {
    const auto& m = c.mb;
    agent["mb"] = {{"k_ensemble", m.k_ensemble},
                   {"rollout_schedule",
                    {{"x", m.rollout_schedule.x}, {"y", m.rollout_schedule.y}, {"a", m.rollout_schedule.a},
                     {"b", m.rollout_schedule.b}}},
                   {"rollouts_per_update", m.rollouts_per_update},
                   {"model_train_epochs", m.model_train_epochs},
                   {"real_buffer_capacity", m.real_buffer_capacity},
                   {"model_buffer_capacity", m.model_buffer_capacity},
                   {"steps_per_epoch", m.steps_per_epoch},
                   {"updates_per_epoch", m.updates_per_epoch},
                   {"model_hidden", m.model_hidden},
                   {"model_lr", m.model_lr},
                   {"model_batch_size", m.model_batch_size}};
  }
  const auto& r = c.run;
  json run = {{"seeds", r.seeds},         {"total_steps", r.total_steps}, {"eval_every", r.eval_every},
              {"eval_episodes", r.eval_episodes}, {"mc_rollouts", r.mc_rollouts}, {"mc_states", r.mc_states},
              {"delta_batch", r.delta_batch}, {"workers", r.workers}};
  const auto& s = c.scenario;
  json scenario = {{"kind", to_string(s.kind)},      {"step", s.step},
                   {"trajectory_file", s.trajectory_file}, {"lambdas", s.lambdas},
                   {"checkpoints", s.checkpoints}, {"operators", s.operators}};
  return {{"env", env}, {"agent", agent}, {"run", run}, {"scenario", scenario}, {"output_dir", c.output_dir}};
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string text = to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace bee::harness
