// Acceptance gate: runs every criterion at its stated tolerance and prints one
// PASS/FAIL line per criterion. Exit status is nonzero if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bee/agent/bac_agent.hpp"
#include "bee/agent/lambda.hpp"
#include "bee/agent/trainer.hpp"
#include "bee/diag/estimation.hpp"
#include "bee/harness/experiment.hpp"
#include "bee/harness/grid_compare.hpp"
#include "bee/harness/particle_compare.hpp"
#include "bee/harness/tabular_suite.hpp"
#include "bee/mb/mb_bac.hpp"
#include "support/fixtures.hpp"
#include "support/gradient_gate.hpp"
#include "support/reference_sac.hpp"

using namespace bee;
namespace fs = std::filesystem;
using nn::Vector;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

/// One-sided sign test: P(X >= wins) for X ~ Binomial(n, 1/2).
double sign_test_p(int wins, int n) {
  double p = 0.0;
  for (int k = wins; k <= n; ++k) p += std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)) * std::pow(0.5, n);
  return p;
}

bool same_params(const nn::NetParams& a, const nn::NetParams& b, double tol, double* worst = nullptr) {
  double w = 0.0;
  for (std::size_t i = 0; i < a.parameter_count(); ++i) w = std::max(w, std::abs(a.flat(i) - b.flat(i)));
  if (worst) *worst = std::max(*worst, w);
  return w <= tol;
}

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// 1
Verdict contraction() {
  const auto r = harness::contraction_suite({});
  return {r.passed, fmt("%.0f checks over 50 MDPs x 100 pairs x 5 lambdas, worst margin %.3g (tol 1e-12)", r.checks, r.worst) +
                        (r.passed ? "" : "; " + r.detail)};
}

// 2
Verdict optimality() {
  const auto r = harness::optimality_suite({});
  return {r.passed, fmt("max |Q_PI - Q*| = %.3g (tol 1e-6), monotone within 1e-9", r.worst) + (r.passed ? "" : "; " + r.detail)};
}

// 3
Verdict reductions() {
  Verdict v;
  agent::BacConfig cfg;
  cfg.hidden_sizes = {32, 32};
  double worst_t = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    Rng rng(100 + trial);
    const auto batch = testing::random_batch(4, 2, 64, rng, 5);
    cfg.lambda = 0.0;
    agent::BacAgent explore(cfg, 4, 2, 7 + trial);
    testing::ReferenceSac ref(cfg, 4, 2, 7 + trial);
    Rng r1(trial), r2(trial);
    const Vector t0 = explore.blended_targets(batch, r1).target;
    const Vector soft = ref.soft_targets(batch, r2);
    worst_t = std::max(worst_t, (t0 - soft).cwiseAbs().maxCoeff());

    cfg.lambda = 1.0;
    agent::BacAgent exploit(cfg, 4, 2, 7 + trial);
    Rng r3(trial);
    const Vector t1 = exploit.blended_targets(batch, r3).target;
    const nn::Matrix vnext = exploit.v().forward(batch.next_states);
    for (int j = 0; j < batch.size(); ++j)
      worst_t = std::max(worst_t, std::abs(t1[j] - (batch.rewards[j] + cfg.gamma * batch.not_done[j] * vnext(0, j))));
  }
  v.pass = worst_t <= 1e-10;

  agent::BacConfig run_cfg;
  run_cfg.lambda = 0.0;
  run_cfg.hidden_sizes = {32, 32};
  run_cfg.batch_size = 64;
  run_cfg.warmup_transitions = 200;
  const auto spec = env::EnvSpec::point_mass_default(env::RewardMode::dense);
  agent::BacTrainer tr(run_cfg, spec, 21);
  testing::ReferenceSacRun ref(run_cfg, spec, 21);
  for (int i = 0; i < 2000; ++i) {
    tr.iterate();
    ref.iterate();
  }
  double worst_p = 0.0;
  bool same = same_params(tr.agent().q1().params(), ref.agent().q1.params(), 1e-10, &worst_p);
  same = same_params(tr.agent().q2().params(), ref.agent().q2.params(), 1e-10, &worst_p) && same;
  same = same_params(tr.agent().q1_target().params(), ref.agent().q1_t.params(), 1e-10, &worst_p) && same;
  same = same_params(tr.agent().policy().params(), ref.agent().pi.params(), 1e-10, &worst_p) && same;
  v.pass = v.pass && same;
  v.detail = fmt("target deviation %.3g, 2000-step lambda=0 vs plain SAC parameter deviation %.3g (tol 1e-10)", worst_t, worst_p);
  return v;
}

// 4
Verdict expectile() {
  const double v50 = testing::loss_expectile({0, 10}, 0.5);
  const double v90 = testing::agent_expectile({0, 10}, 0.9);
  const double a = testing::agent_expectile({0, 3, 10}, 0.55), b = testing::agent_expectile({0, 3, 10}, 0.7),
               c = testing::agent_expectile({0, 3, 10}, 0.9);
  const bool monotone = a <= b && b <= c;
  return {std::abs(v50 - 5.0) <= 0.05 && std::abs(v90 - 9.0) <= 0.05 && monotone,
          fmt("V(0.5) = %.4f, V(0.9) = %.4f (tol 0.05); V over tau .55/.7/.9 = %.3f/%.3f", v50, v90, a, b) +
              fmt("/%.3f ", c) + (monotone ? "monotone" : "NOT monotone")};
}

// 5
Verdict gradients() {
  const auto worst = testing::gradient_gate(100, 2025);
  Verdict v;
  std::ostringstream os;
  for (const auto& [name, err] : worst) {
    os << name << ' ' << fmt("%.2g", err) << "  ";
    v.pass = v.pass && err < 1e-4;
  }
  v.detail = os.str() + "(100 points each, tol 1e-4)";
  return v;
}

// 6
Verdict grid() {
  harness::GridCompareConfig g;
  g.lambdas = {0.0, 0.5, 1.0};
  const auto r = harness::grid_compare(g);
  int unvisited = 0, faster = 0;
  for (auto seed : g.seeds) {
    unvisited += r.find(1.0, seed).unvisited_free_cells >= 1;
    const int half = r.find(0.5, seed).sweeps_to_optimal, zero = r.find(0.0, seed).sweeps_to_optimal;
    // a run that never reaches the optimal policy counts as infinitely slow
    faster += half >= 0 && (zero < 0 || half < zero);
  }
  return {unvisited >= 6 && faster >= 7,
          fmt("lambda=1 left unvisited cells in %.0f/10 (need 6); lambda=0.5 faster than lambda=0 in %.0f/10 (need 7)",
              unvisited, faster)};
}

// 7
Verdict particle() {
  harness::ParticleCompareConfig p;
  const auto r = harness::particle_compare(p);
  int wins = 0;
  double succ = 0.0;
  for (const auto& run : r.runs) {
    bool all = true;
    for (int it : {100, 200, 500}) all = all && run.mae("bee", it) < run.mae("standard", it);
    wins += all;
    succ += run.successes;
  }
  return {wins >= 8, fmt("BEE MAE below standard at 100/200/500 on %.0f/10 seeds (need 8); mean successes per buffer %.1f",
                         wins, succ / r.runs.size())};
}

// 8
Verdict desk_learning() {
  const auto spec = env::EnvSpec::point_mass_default(env::RewardMode::sparse);
  auto config = [](double lambda) {
    agent::BacConfig c;
    c.lambda = lambda;
    c.expectile_tau = 0.7;
    c.hidden_sizes = {32, 32};
    c.batch_size = 64;
    c.lr = 3e-4;
    c.learn_alpha = false;
    c.init_alpha = 0.01;
    return c;
  };
  const int steps = 50000, every = 2500;
  struct Curve {
    double auc = 0.0, final = 0.0;
  };
  auto run = [&](double lambda, std::uint64_t seed) {
    agent::BacTrainer tr(config(lambda), spec, seed);
    Curve c;
    int n = 0;
    for (int i = 1; i <= steps; ++i) {
      tr.iterate();
      if (i % every == 0) {
        const auto e = tr.evaluate(10, i);
        c.auc += e.success_rate;
        c.final = e.success_rate;
        ++n;
      }
    }
    c.auc /= n;
    return c;
  };
  double final_sum = 0.0;
  int wins = 0, decided = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto bac = run(0.5, seed), base = run(0.0, seed);
    final_sum += bac.final;
    if (bac.auc != base.auc) {
      ++decided;
      wins += bac.auc > base.auc;
    }
    std::printf("      seed %2lu: BAC auc %.3f final %.2f | lambda=0 auc %.3f final %.2f\n", static_cast<unsigned long>(seed),
                bac.auc, bac.final, base.auc, base.final);
    std::fflush(stdout);
  }
  const double final_mean = final_sum / 10.0;
  const double p = decided > 0 ? sign_test_p(wins, decided) : 1.0;
  return {final_mean >= 0.9 && p < 0.05,
          fmt("BAC final success %.2f (need 0.9); AUC wins %.0f/%.0f, sign test p = %.4f (need < 0.05)", final_mean, wins,
              decided, p)};
}

// 9
Verdict diagnostics() {
  const auto g = diag::estimation_gap_series({5.0, 3.0}, {7.0, 1.0});
  const bool sign = g.gap[0] == -2.0 && g.gap_normalized[0] == -2.0 / 7.0 && g.gap[1] == 2.0 && g.gap_normalized[1] == 2.0;
  const double under = testing::delta_fixture(false, 1), greedy = testing::delta_fixture(true, 1);
  return {sign && under > 0.0 && greedy <= 0.0,
          std::string(sign ? "gap sign exact" : "gap sign WRONG") + fmt("; delta-hat under-exploitation %.4f, greedy %.4f", under, greedy)};
}

// 10
Verdict ada() {
  Vector exploit(3), explore(3);
  exploit << 1.5, 4.0, -1.0;
  explore << 2.0, 1.0, -1.0;
  const Vector lmin = agent::row_lambda(agent::LambdaMode::min, 0.5, exploit, explore);
  const Vector lmax = agent::row_lambda(agent::LambdaMode::max, 0.5, exploit, explore);
  bool rows = true;
  for (int i = 0; i < 3; ++i) {
    const double tmin = lmin[i] * exploit[i] + (1 - lmin[i]) * explore[i];
    const double tmax = lmax[i] * exploit[i] + (1 - lmax[i]) * explore[i];
    rows = rows && tmin == std::min(exploit[i], explore[i]) && tmax == std::max(exploit[i], explore[i]);
  }
  const bool ratio = agent::ada_lambda(0.5, 1.0) == 0.5 && agent::ada_lambda(2.0, 1.0) == 1.0;
  return {ratio && rows, std::string(ratio ? "clip(0.5/1)=0.5, clip(2/1)=1 exact" : "ada ratio WRONG") +
                             (rows ? "; min/max pick the smaller/larger row target" : "; min/max rows WRONG")};
}

// 11
Verdict model_based() {
  const double err = testing::linear_dynamics_error(1);
  const mb::RolloutSchedule f{1, 15, 20, 100};
  const bool sched = f.length(10) == 1 && f.length(60) == 8 && f.length(200) == 15;
  int improved = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    agent::BacConfig cfg;
    cfg.hidden_sizes = {32, 32};
    cfg.batch_size = 64;
    cfg.warmup_transitions = 200;
    mb::MbConfig m;
    m.steps_per_epoch = 200;
    m.updates_per_epoch = 400;
    m.model_hidden = {32, 32};
    m.rollouts_per_update = 100;
    m.model_batch_size = 64;
    mb::MbBac run(cfg, m, env::EnvSpec::point_mass_default(env::RewardMode::dense), seed);
    double first = 0.0, last = 0.0;
    for (int e = 1; e <= 30; ++e) {
      run.epoch();
      const double ret = run.evaluate(10, e).mean_return;
      if (e == 1) first = ret;
      last = ret;
    }
    improved += last > first;
    std::printf("      seed %2lu: return after epoch 1 %.2f, after epoch 30 %.2f\n", static_cast<unsigned long>(seed), first, last);
    std::fflush(stdout);
  }
  return {err < 1e-2 && sched && improved >= 8,
          fmt("linear dynamics error %.2g (tol 1e-2); schedule f(10),f(60),f(200) = %.0f,%.0f,", err, f.length(10), f.length(60)) +
              fmt("%.0f; improved on %.0f/10 seeds (need 8)", f.length(200), improved)};
}

// 12
Verdict reproducibility() {
  const auto root = fs::temp_directory_path() / "bee_acceptance_repro";
  fs::remove_all(root);
  harness::ExperimentConfig cfg;
  cfg.agent.hidden_sizes = {32, 32};
  cfg.agent.batch_size = 64;
  cfg.agent.warmup_transitions = 200;
  cfg.run.seeds = {1, 2};
  cfg.run.total_steps = 2000;
  cfg.run.eval_every = 500;
  cfg.run.eval_episodes = 3;
  cfg.run.mc_rollouts = 2;
  cfg.run.mc_states = 3;
  cfg.run.delta_batch = 64;
  harness::RunOptions opts;
  opts.quiet = true;
  opts.output_root = root.string();
  auto read = [](const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };
  cfg.output_dir = "first";
  const auto a = harness::run_experiment(cfg, opts);
  cfg.output_dir = "second";
  const auto b = harness::run_experiment(cfg, opts);
  bool same = a.exit_code == 0 && b.exit_code == 0;
  long bytes = 0;
  for (const auto& s : a.seeds) {
    const auto x = read(fs::path(a.output_dir) / s.csv), y = read(fs::path(b.output_dir) / s.csv);
    same = same && !x.empty() && x == y;
    bytes += static_cast<long>(x.size());
  }
  fs::remove_all(root);
  return {same, std::string("2 seeds run twice: CSVs ") + (same ? "byte-identical" : "DIFFER") +
                    fmt(" (%.0f bytes compared)", bytes)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;  // stated runtime bound; 0 = none
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "contraction suite", 10, contraction},
      {2, "optimality and monotone improvement", 30, optimality},
      {3, "reduction identities", 0, reductions},
      {4, "expectile oracle", 0, expectile},
      {5, "gradient gate", 60, gradients},
      {6, "grid-maze comparison", 120, grid},
      {7, "random-walk heatmaps", 300, particle},
      {8, "desk-scale learning", 1200, desk_learning},
      {9, "diagnostics", 0, diagnostics},
      {10, "adaptive lambda", 0, ada},
      {11, "model-based extension", 900, model_based},
      {12, "reproducibility", 0, reproducibility},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    std::printf("[....] %2d %s\n", c.id, c.name);
    std::fflush(stdout);
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string timing = fmt("%.1f s", secs);
    if (c.budget_s > 0) {
      timing += fmt(" (limit %.0f s)", c.budget_s);
      if (secs >= c.budget_s) {
        v.pass = false;
        timing += " OVER BUDGET";
      }
    }
    failed += !v.pass;
    std::printf("[%s] %2d %s: %s; %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), timing.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
