#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bee/agent/trainer.hpp"
#include "bee/errors.hpp"
#include "bee/harness/config.hpp"
#include "bee/harness/csv.hpp"
#include "bee/harness/experiment.hpp"
#include "bee/harness/heatmap.hpp"
#include "bee/harness/particle_compare.hpp"
#include "bee/harness/report.hpp"
#include "bee/harness/scenario.hpp"

using namespace bee;
using namespace bee::harness;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("bee_harness_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

ExperimentConfig quick_config(const std::string& out) {
  ExperimentConfig cfg;
  cfg.agent.hidden_sizes = {16, 16};
  cfg.agent.batch_size = 32;
  cfg.agent.warmup_transitions = 100;
  cfg.run.seeds = {1, 2};
  cfg.run.total_steps = 1000;
  cfg.run.eval_every = 250;
  cfg.run.eval_episodes = 2;
  cfg.run.delta_batch = 32;
  cfg.run.mc_rollouts = 1;
  cfg.run.mc_states = 2;
  cfg.output_dir = out;
  return cfg;
}

RunOptions quiet() {
  RunOptions o;
  o.quiet = true;
  return o;
}

/// 2400 transitions gathered by a random walk on the point mass, saved as a replay file.
std::string trajectory_file(const fs::path& dir) {
  auto spec = env::EnvSpec::point_mass_default(env::RewardMode::sparse);
  auto e = env::make_env(spec, 3);
  replay::ReplayBuffer b(2400, spec.observation_dim, spec.action_space.dim());
  Rng rng(4);
  auto obs = e->reset();
  while (b.size() < 2400) {
    std::vector<double> a{uniform(rng, -1, 1), uniform(rng, -1, 1)};
    auto r = e->step(agent::scale_action(a, spec.action_space));
    b.push({obs, a, r.reward, r.observation, r.terminated});
    obs = (r.terminated || r.truncated) ? e->reset() : r.observation;
  }
  const auto path = (dir / "trajectories.bin").string();
  b.save(path);
  return path;
}

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("sections and defaults") {
    const auto cfg = config_from_json(json::parse(R"({
      "env": {"kind": "point_mass", "reward_mode": "sparse", "horizon": 150},
      "agent": {"lambda": 0.3, "hidden_sizes": [8, 8], "lambda_mode": "ada"},
      "run": {"seeds": [3, 4], "total_steps": 2000, "eval_every": 500},
      "scenario": {"kind": "counteract_failure", "step": 700},
      "output_dir": "x"
    })"));
    CHECK(cfg.env.horizon == 150);
    CHECK(cfg.env.reward_mode == env::RewardMode::sparse);
    CHECK(cfg.agent.lambda == 0.3);
    CHECK(cfg.agent.lambda_mode == agent::LambdaMode::ada);
    CHECK(cfg.agent.expectile_tau == 0.7);
    CHECK(cfg.run.seeds == std::vector<std::uint64_t>{3, 4});
    CHECK(cfg.scenario.kind == ScenarioKind::counteract_failure);
    CHECK(cfg.scenario.step == 700);
  }
  SUBCASE("every violation is listed") {
    try {
      config_from_json(json::parse(R"({
        "agent": {"lambda": 2.0, "expectile_tau": 0.3, "bogus": 1},
        "run": {"seeds": [], "total_steps": 100, "eval_every": 500}
      })"));
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      const auto& v = e.violations();
      auto has = [&](const std::string& needle) {
        for (const auto& s : v)
          if (s.find(needle) != std::string::npos) return true;
        return false;
      };
      CHECK(has("agent.lambda"));
      CHECK(has("agent.expectile_tau"));
      CHECK(has("agent.bogus"));
      CHECK(has("run.seeds"));
      CHECK(has("eval_every"));
      CHECK(v.size() >= 5);
    }
  }
  SUBCASE("round trip through the canonical form") {
    ExperimentConfig cfg = quick_config("rt");
    cfg.agent_kind = AgentKind::mb_bac;
    cfg.mb.rollout_schedule = {2, 9, 5, 50};
    const auto back = config_from_json(to_json(cfg));
    CHECK(to_json(back) == to_json(cfg));
    CHECK(config_hash(back) == config_hash(cfg));
  }
  SUBCASE("hash follows every field") {
    const ExperimentConfig base = quick_config("h");
    const auto h = config_hash(base);
    CHECK(h.size() == 16u);
    auto c1 = base;
    c1.agent.lr *= 1.0 + 1e-12;
    auto c2 = base;
    c2.run.seeds.push_back(9);
    auto c3 = base;
    c3.env.point_mass.goal_radius = 0.11;
    auto c4 = base;
    c4.output_dir = "elsewhere";
    for (const auto& c : {c1, c2, c3, c4}) CHECK(config_hash(c) != h);
    CHECK(config_hash(base) == h);
  }
}

TEST_CASE("csv rows") {
  CHECK(csv_header() ==
        "step,episode_return,success,q_learned_mean,q_mc_mean,gap,gap_normalized,delta_mu_pi,lambda_used,alpha,loss_q,"
        "loss_v,loss_pi,seed");
  diag::RunRecord r;
  r.step = 42;
  r.episode_return = 0.1;
  r.alpha = 1.0 / 3.0;
  r.loss_q = -2.5e-300;
  r.seed = 7;
  const auto line = csv_row(r);
  CHECK(line.find(",,") != std::string::npos);
  CHECK(parse_csv_row(line) == r);

  const auto dir = scratch("csv");
  {
    CsvWriter w((dir / "a.csv").string());
    w.write(r);
    r.step = 43;
    w.write(r);
  }
  const auto rows = read_csv((dir / "a.csv").string());
  REQUIRE(rows.size() == 2u);
  CHECK(rows[1].step == 43);
  std::ofstream((dir / "bad.csv").string()) << "step,wrong\n1,2\n";
  CHECK_THROWS(read_csv((dir / "bad.csv").string()));
}

TEST_CASE("heatmaps") {
  const auto px = heatmap_pixels({{0, 1}, {2, 3}});
  CHECK(px == std::vector<std::uint8_t>{0, 85, 170, 255});
  for (auto p : heatmap_pixels({{4, 4, 4}, {4, 4, 4}})) CHECK(p == 128);

  const auto dir = scratch("heat");
  emit_heatmap({{0, 1}, {2, 3}}, (dir / "h").string());
  const auto pgm = slurp(dir / "h.pgm");
  const std::string header = "P5\n2 2\n255\n";
  REQUIRE(pgm.size() == header.size() + 4);
  CHECK(pgm.substr(0, header.size()) == header);
  CHECK(static_cast<unsigned char>(pgm[header.size() + 3]) == 255);
  CHECK(fs::exists(dir / "h.csv"));
  CHECK_THROWS(heatmap_pixels({{0, 1}, {2}}));
}

TEST_CASE("scenario application") {
  agent::BacConfig acfg;
  acfg.hidden_sizes = {8};
  agent::BacAgent ag(acfg, 4, 2, 1);
  replay::ReplayBuffer buf(5000, 4, 2);
  for (int i = 0; i < 10; ++i) buf.push({{0, 0, 0, double(i)}, {0, 0}, 1.0, {0, 0, 0, 0}, false});
  const auto pi_before = ag.policy().params();
  auto same_policy = [&] {
    for (std::size_t i = 0; i < pi_before.parameter_count(); ++i)
      if (ag.policy().params().flat(i) != pi_before.flat(i)) return false;
    return true;
  };

  SUBCASE("none changes nothing") {
    Scenario s;
    const auto o = scenario_apply(s, ag, buf, 0, 5);
    CHECK_FALSE(o.applied);
    CHECK(same_policy());
    CHECK(buf.size() == 10);
  }
  SUBCASE("counteract resets networks but keeps the data") {
    Scenario s;
    s.kind = ScenarioKind::counteract_failure;
    s.step = 30;
    CHECK_FALSE(scenario_apply(s, ag, buf, 29, 5).applied);
    CHECK(same_policy());
    const auto v_before = ag.v().params();
    CHECK(scenario_apply(s, ag, buf, 30, 5).applied);
    CHECK_FALSE(same_policy());
    CHECK(ag.v().params().flat(0) != v_before.flat(0));
    CHECK(buf.size() == 10);
    for (int i = 0; i < 10; ++i) CHECK(buf.at(i).state[3] == double(i));
  }
  SUBCASE("serendipity with an empty file is a warned no-op") {
    const auto dir = scratch("empty_traj");
    replay::ReplayBuffer(10, 4, 2).save((dir / "empty.bin").string());
    Scenario s;
    s.kind = ScenarioKind::serendipity_injection;
    s.trajectory_file = (dir / "empty.bin").string();
    const auto o = scenario_apply(s, ag, buf, 0, 5);
    CHECK(o.injected == 0u);
    CHECK_FALSE(o.warning.empty());
    CHECK(buf.size() == 10);
    s.trajectory_file = (dir / "missing.bin").string();
    CHECK_FALSE(scenario_apply(s, ag, buf, 0, 5).warning.empty());
  }
}

TEST_CASE("experiment runs") {
  const auto root = scratch("runs");
  RunOptions opts = quiet();
  opts.output_root = root.string();

  SUBCASE("two seeds give two CSVs and a manifest, reproducibly") {
    const auto cfg = quick_config("pair");
    const auto r1 = run_experiment(cfg, opts);
    CHECK(r1.exit_code == 0);
    REQUIRE(r1.seeds.size() == 2u);
    const fs::path dir = r1.output_dir;
    CHECK(fs::exists(dir / "seed_1.csv"));
    CHECK(fs::exists(dir / "seed_2.csv"));
    CHECK(fs::exists(dir / "manifest.json"));
    const auto rows = read_csv((dir / "seed_1.csv").string());
    REQUIRE(rows.size() == 4u);
    CHECK(rows[0].step == 250);
    CHECK(rows[3].step == 1000);
    CHECK(rows[0].gap.has_value());
    CHECK(rows[0].delta_mu_pi.has_value());
    for (const auto& row : rows) CHECK(row.consistent());

    const auto m = json::parse(slurp(dir / "manifest.json"));
    CHECK(m["config_hash"] == config_hash(cfg));
    CHECK(m["versions"]["csv_schema"] == kCsvSchemaVersion);
    CHECK(m["seeds"].size() == 2u);

    const auto a = slurp(dir / "seed_1.csv"), b = slurp(dir / "seed_2.csv");
    auto cfg2 = cfg;
    cfg2.output_dir = "pair_again";
    cfg2.run.workers = 2;
    const auto r2 = run_experiment(cfg2, opts);
    CHECK(slurp(fs::path(r2.output_dir) / "seed_1.csv") == a);
    CHECK(slurp(fs::path(r2.output_dir) / "seed_2.csv") == b);
    CHECK(a != b);

    // the report reads what the run wrote
    const auto summary = summarize_dir(r1.output_dir);
    CHECK(summary.size() == 2u);
  }

  SUBCASE("seed offset shifts every seed") {
    auto cfg = quick_config("offset");
    cfg.run.seeds = {1};
    cfg.run.total_steps = 250;
    RunOptions o = opts;
    o.seed_offset = 10;
    const auto r = run_experiment(cfg, o);
    CHECK(fs::exists(fs::path(r.output_dir) / "seed_11.csv"));
  }

  SUBCASE("serendipity injection is recorded for both agents") {
    const auto traj = trajectory_file(root);
    for (double lam : {0.5, 0.0}) {
      auto cfg = quick_config(lam == 0.0 ? "inject_sac" : "inject_bac");
      cfg.env = env::EnvSpec::point_mass_default(env::RewardMode::sparse);
      cfg.agent.lambda = lam;
      cfg.run.total_steps = 250;
      cfg.scenario.kind = ScenarioKind::serendipity_injection;
      cfg.scenario.step = 0;
      cfg.scenario.trajectory_file = traj;
      const auto r = run_experiment(cfg, opts);
      const auto m = json::parse(slurp(r.manifest));
      for (const auto& s : m["seeds"]) CHECK(s["injected"] == 2400);
    }
  }

  SUBCASE("counteract failure reinitializes at its step") {
    auto base = quick_config("plain");
    base.run.seeds = {3};
    base.run.eval_every = 100;
    base.run.mc_rollouts = 0;
    auto hit = base;
    hit.output_dir = "counteract";
    hit.scenario.kind = ScenarioKind::counteract_failure;
    hit.scenario.step = 500;
    const auto a = read_csv((fs::path(run_experiment(base, opts).output_dir) / "seed_3.csv").string());
    const auto b = read_csv((fs::path(run_experiment(hit, opts).output_dir) / "seed_3.csv").string());
    REQUIRE(a.size() == 10u);
    REQUIRE(b.size() == 10u);
    for (int i = 0; i < 4; ++i) CHECK(a[i] == b[i]);  // steps 100..400
    bool diverged = false;
    for (int i = 4; i < 10; ++i) diverged = diverged || !(a[i] == b[i]);
    CHECK(diverged);
  }

  SUBCASE("numeric failure keeps the partial CSV and sets the exit code") {
    auto cfg = quick_config("blowup");
    cfg.run.seeds = {1};
    cfg.agent.init_alpha = 1e308;  // alpha * log pi overflows the explore target
    const auto r = run_experiment(cfg, opts);
    CHECK(r.exit_code == 2);
    CHECK(r.seeds[0].status == "numeric_error");
    CHECK(fs::exists(fs::path(r.output_dir) / "seed_1.csv"));
  }

  SUBCASE("mb runs write rows per epoch") {
    auto cfg = quick_config("mb");
    cfg.agent_kind = AgentKind::mb_bac;
    cfg.run.seeds = {1};
    cfg.run.total_steps = 400;
    cfg.run.eval_every = 200;
    cfg.mb.steps_per_epoch = 100;
    cfg.mb.updates_per_epoch = 10;
    cfg.mb.rollouts_per_update = 20;
    cfg.mb.model_hidden = {8, 8};
    cfg.mb.model_train_epochs = 1;
    cfg.mb.k_ensemble = 2;
    const auto r = run_experiment(cfg, opts);
    CHECK(r.exit_code == 0);
    CHECK(read_csv((fs::path(r.output_dir) / "seed_1.csv").string()).size() == 2u);
  }
}

TEST_CASE("output root") {
  ExperimentConfig cfg;
  cfg.output_dir = "rel";
  RunOptions o;
  o.output_root = "/tmp/root";
  CHECK(resolve_output_dir(cfg, o) == "/tmp/root/rel");
  cfg.output_dir = "/abs";
  CHECK(resolve_output_dir(cfg, o) == "/abs");
}

TEST_CASE("particle comparison heatmaps") {
  const auto dir = scratch("particle");
  ParticleCompareConfig p;
  p.seeds = {1};
  p.transitions = 20000;
  p.resolution = 10;
  p.heatmap_dir = dir.string();
  const auto r = particle_compare(p);
  REQUIRE(r.runs.size() == 1u);
  CHECK(r.runs[0].checkpoints.size() == 6u);
  int pgm = 0, csv = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (name.rfind("seed1_", 0) != 0) continue;
    pgm += e.path().extension() == ".pgm";
    csv += e.path().extension() == ".csv";
  }
  CHECK(pgm == 6);
  CHECK(csv == 6);
  for (const auto& op : {"bee", "standard"})
    for (int it : {100, 200, 500}) CHECK(fs::exists(dir / ("seed1_" + std::string(op) + "_" + std::to_string(it) + ".pgm")));
}
