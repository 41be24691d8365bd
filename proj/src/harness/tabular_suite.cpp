#include "bee/harness/tabular_suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "bee/random.hpp"
#include "bee/tabular/bee_operator.hpp"

namespace bee::harness {

using namespace bee::mdp;
using namespace bee::tabular;

namespace {

const std::vector<double> kLambdas{0.0, 0.25, 0.5, 0.75, 1.0};

struct Fixture {
  TabularMdp mdp;
  MixturePolicy mu;
  TabularPolicy pi;
};

TabularPolicy random_stochastic(int ns, int na, Rng& rng) {
  TabularPolicy p(ns, na);
  for (int s = 0; s < ns; ++s) {
    double z = 0.0;
    for (int a = 0; a < na; ++a) z += (p(s, a) = uniform(rng, 0.05, 1.0));
    for (int a = 0; a < na; ++a) p(s, a) /= z;
  }
  return p;
}

Fixture random_fixture(const TabularSuiteConfig& cfg, int index) {
  Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(index)));
  const int ns = std::uniform_int_distribution<int>(2, cfg.max_states)(rng);
  const int na = std::uniform_int_distribution<int>(2, cfg.max_actions)(rng);
  auto mdp = build_random_mdp(ns, na, cfg.gamma, derive_seed(cfg.seed, 10000 + index));
  std::vector<TabularPolicy> members;
  const int k = std::uniform_int_distribution<int>(1, 3)(rng);
  for (int i = 0; i < k; ++i) {
    std::vector<int> acts(ns);
    for (auto& a : acts) a = std::uniform_int_distribution<int>(0, na - 1)(rng);
    members.push_back(TabularPolicy::deterministic(acts, na));
  }
  return {std::move(mdp), MixturePolicy::uniform(std::move(members)), random_stochastic(ns, na, rng)};
}

class Timer {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

void fail(SuiteResult& r, const std::string& msg) {
  if (r.passed) r.detail = msg;
  r.passed = false;
}

}  // namespace

SuiteResult contraction_suite(const TabularSuiteConfig& cfg) {
  Timer t;
  SuiteResult r;
  r.name = "contraction";
  for (int m = 0; m < cfg.n_mdps; ++m) {
    const auto f = random_fixture(cfg, m);
    for (int p = 0; p < cfg.q_pairs; ++p) {
      const auto q1 = random_qtable(f.mdp.n_states(), f.mdp.n_actions(), derive_seed(cfg.seed, 20000 + m * 1000 + 2 * p));
      const auto q2 = random_qtable(f.mdp.n_states(), f.mdp.n_actions(), derive_seed(cfg.seed, 20001 + m * 1000 + 2 * p));
      const double d = max_abs_diff(q1, q2);
      for (double lam : kLambdas) {
        const BlendConfig b{lam, 0.1};
        const double lhs = max_abs_diff(bee_backup(f.mdp, q1, f.mu, f.pi, b), bee_backup(f.mdp, q2, f.mu, f.pi, b));
        const double margin = lhs - cfg.gamma * d;
        r.worst = std::max(r.worst, margin);
        ++r.checks;
        if (margin > 1e-12) {
          std::ostringstream os;
          os << "mdp " << m << " pair " << p << " lambda " << lam << ": " << lhs << " > " << cfg.gamma * d;
          fail(r, os.str());
        }
      }
    }
  }
  r.seconds = t.seconds();
  return r;
}

SuiteResult optimality_suite(const TabularSuiteConfig& cfg) {
  Timer t;
  SuiteResult r;
  r.name = "optimality";
  for (int m = 0; m < cfg.n_mdps; ++m) {
    const auto f = random_fixture(cfg, m);
    const auto oracle = value_iteration_oracle(f.mdp, 1e-12);
    for (double lam : kLambdas) {
      const auto pi = bee_policy_iteration(f.mdp, {lam, 0.0}, 200, 1e-12);
      ++r.checks;
      if (!pi.converged) {
        fail(r, "mdp " + std::to_string(m) + " did not converge");
        continue;
      }
      const double err = max_abs_diff(pi.q, oracle);
      r.worst = std::max(r.worst, err);
      if (err > 1e-6) fail(r, "mdp " + std::to_string(m) + " ends " + std::to_string(err) + " from Q*");
      for (std::size_t k = 1; k < pi.trace.size(); ++k) {
        const auto& prev = pi.trace[k - 1].data();
        const auto& cur = pi.trace[k].data();
        for (std::size_t i = 0; i < cur.size(); ++i)
          if (cur[i] < prev[i] - 1e-9) fail(r, "mdp " + std::to_string(m) + " decreased at iteration " + std::to_string(k));
      }
    }
  }
  r.seconds = t.seconds();
  return r;
}

SuiteResult reduction_suite(const TabularSuiteConfig& cfg) {
  Timer t;
  SuiteResult r;
  r.name = "reductions";
  for (int m = 0; m < cfg.n_mdps; ++m) {
    const auto f = random_fixture(cfg, m);
    const int ns = f.mdp.n_states(), na = f.mdp.n_actions();
    const auto q = random_qtable(ns, na, derive_seed(cfg.seed, 30000 + m));
    const BlendConfig explore_only{0.0, 0.1}, exploit_only{1.0, 0.1};
    const auto check = [&](const QTable& a, const QTable& b, const char* what) {
      const double e = max_abs_diff(a, b);
      r.worst = std::max(r.worst, e);
      ++r.checks;
      if (e > 1e-12) fail(r, std::string(what) + " differs by " + std::to_string(e) + " on mdp " + std::to_string(m));
    };
    check(bee_backup(f.mdp, q, f.mu, f.pi, exploit_only), exploit_backup(f.mdp, q, f.mu), "lambda=1 vs exploit");
    check(bee_backup(f.mdp, q, f.mu, f.pi, explore_only), explore_backup(f.mdp, q, f.pi, explore_only),
          "lambda=0 vs explore");
    check(explore_backup(f.mdp, q, f.pi, {0.0, 0.0}), evaluation_backup(f.mdp, q, f.pi), "omega=0 explore vs T^pi");
    check(exploit_backup(f.mdp, q, SupportMask(ns, na, true)), optimality_backup(f.mdp, q), "full-support exploit vs T*");
  }
  r.seconds = t.seconds();
  return r;
}

SuiteResult fixed_point_suite(const TabularSuiteConfig& cfg) {
  Timer t;
  SuiteResult r;
  r.name = "fixed_point";
  for (int m = 0; m < cfg.n_mdps; ++m) {
    const auto f = random_fixture(cfg, m);
    const int ns = f.mdp.n_states(), na = f.mdp.n_actions();
    for (double lam : kLambdas) {
      const BlendConfig b{lam, 0.1};
      const auto a = bee_policy_evaluation(f.mdp, QTable(ns, na, 0.0), f.mu, f.pi, b, 1e-12);
      const auto c = bee_policy_evaluation(f.mdp, random_qtable(ns, na, derive_seed(cfg.seed, 40000 + m)), f.mu, f.pi, b,
                                           1e-12);
      const double e = max_abs_diff(a.q, c.q);
      r.worst = std::max(r.worst, e);
      ++r.checks;
      if (e > 1e-8) fail(r, "mdp " + std::to_string(m) + " has two fixed points " + std::to_string(e) + " apart");
    }
  }
  r.seconds = t.seconds();
  return r;
}

std::vector<SuiteResult> run_tabular_suites(const TabularSuiteConfig& cfg) {
  return {contraction_suite(cfg), optimality_suite(cfg), reduction_suite(cfg), fixed_point_suite(cfg)};
}

}  // namespace bee::harness
