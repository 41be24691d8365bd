#include <doctest.h>

#include <cmath>

#include "bee/errors.hpp"
#include "bee/random.hpp"
#include "bee/tabular/bee_operator.hpp"

using namespace bee;
using namespace bee::mdp;
using namespace bee::tabular;

namespace {

// Both actions of s0 move deterministically to s1 with r = 0; s1 loops on itself.
TabularMdp to_s1(double gamma) {
  return TabularMdp::from_dense({{{0.0, 1.0}, {0.0, 1.0}}, {{0.0, 1.0}, {0.0, 1.0}}}, {{0.0, 0.0}, {0.0, 0.0}}, gamma);
}

QTable successor_values() {
  QTable q(2, 2);
  q(1, 0) = 1.0;
  q(1, 1) = 3.0;
  return q;
}

TabularMdp chain(double gamma) {
  return TabularMdp::from_dense({{{1.0, 0.0}, {0.0, 1.0}}, {{0.0, 1.0}, {0.0, 1.0}}}, {{0.0, 1.0}, {0.0, 0.0}}, gamma,
                                {false, true});
}

TabularPolicy random_policy(int ns, int na, Rng& rng) {
  TabularPolicy p(ns, na);
  for (int s = 0; s < ns; ++s) {
    double z = 0.0;
    for (int a = 0; a < na; ++a) z += (p(s, a) = uniform(rng, 0.05, 1.0));
    for (int a = 0; a < na; ++a) p(s, a) /= z;
  }
  return p;
}

SupportMask random_support(int ns, int na, Rng& rng) {
  SupportMask m(ns, na);
  for (int s = 0; s < ns; ++s) {
    m.set(s, std::uniform_int_distribution<int>(0, na - 1)(rng));
    for (int a = 0; a < na; ++a)
      if (uniform(rng) < 0.3) m.set(s, a);
  }
  return m;
}

}  // namespace

TEST_CASE("exploit backup") {
  const auto m = to_s1(0.9);
  const auto q = successor_values();
  CHECK(exploit_backup(m, q, SupportMask(2, 2, true))(0, 0) == doctest::Approx(2.7).epsilon(1e-14));
  SupportMask first_only(2, 2, true);
  first_only.set(1, 1, false);
  CHECK(exploit_backup(m, q, first_only)(0, 0) == doctest::Approx(0.9).epsilon(1e-14));

  SUBCASE("empty successor support is an error unless a fallback is requested") {
    SupportMask none(2, 2, true);
    none.set(1, 0, false);
    none.set(1, 1, false);
    CHECK_THROWS_AS(exploit_backup(m, q, none), ArgumentError);
    BackupOptions fallback;
    fallback.empty_support = EmptySupportRule::fall_back_to_explore;
    const auto pi = TabularPolicy::uniform(2, 2);
    CHECK(exploit_backup(m, q, none, fallback, &pi, 0.0)(0, 0) == doctest::Approx(1.8).epsilon(1e-14));
  }
}

TEST_CASE("explore backup") {
  const auto m = to_s1(0.9);
  const auto q = successor_values();
  const auto pi = TabularPolicy::uniform(2, 2);
  const double plain = explore_backup(m, q, pi, {0.0, 0.0})(0, 0);
  CHECK(plain == doctest::Approx(1.8).epsilon(1e-14));
  // omega = alpha log pi: the uniform policy's entropy log 2 enters with weight gamma
  CHECK(explore_backup(m, q, pi, {0.0, 1.0})(0, 0) - plain == doctest::Approx(0.9 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("blend") {
  const auto m = to_s1(0.9);
  const auto q = successor_values();
  const auto pi = TabularPolicy::uniform(2, 2);
  const SupportMask full(2, 2, true);
  CHECK(bee_backup(m, q, full, pi, {0.5, 0.0})(0, 0) == doctest::Approx(2.25).epsilon(1e-14));

  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const auto mdp = build_random_mdp(6, 3, 0.9, 100 + t);
    const auto qq = random_qtable(6, 3, 200 + t);
    const auto p = random_policy(6, 3, rng);
    const auto sup = random_support(6, 3, rng);
    CHECK(max_abs_diff(bee_backup(mdp, qq, sup, p, {0.0, 0.2}), explore_backup(mdp, qq, p, {0.0, 0.2})) <= 1e-12);
    CHECK(max_abs_diff(bee_backup(mdp, qq, sup, p, {1.0, 0.2}), exploit_backup(mdp, qq, sup)) <= 1e-12);
  }
  CHECK_THROWS_AS(BlendConfig({1.5, 0.0}).validate(), ArgumentError);
}

TEST_CASE("all three operators are gamma-contractions") {
  Rng rng(17);
  const double gamma = 0.9;
  for (int pair = 0; pair < 100; ++pair) {
    const auto mdp = build_random_mdp(5, 3, gamma, 300 + pair % 10);
    const auto p = random_policy(5, 3, rng);
    const auto sup = random_support(5, 3, rng);
    const auto q1 = random_qtable(5, 3, 1000 + 2 * pair), q2 = random_qtable(5, 3, 1001 + 2 * pair);
    const double d = max_abs_diff(q1, q2);
    CHECK(max_abs_diff(exploit_backup(mdp, q1, sup), exploit_backup(mdp, q2, sup)) <= gamma * d + 1e-12);
    CHECK(max_abs_diff(explore_backup(mdp, q1, p, {0.0, 0.3}), explore_backup(mdp, q2, p, {0.0, 0.3})) <=
          gamma * d + 1e-12);
    CHECK(max_abs_diff(bee_backup(mdp, q1, sup, p, {0.3, 0.3}), bee_backup(mdp, q2, sup, p, {0.3, 0.3})) <=
          gamma * d + 1e-12);
  }
}

TEST_CASE("BEE policy evaluation") {
  const double tol = 1e-10;
  SUBCASE("one state, one action: every lambda gives 1/(1-gamma)") {
    const auto m = TabularMdp::from_dense({{{1.0}}}, {{1.0}}, 0.5);
    const auto mu = MixturePolicy::uniform({TabularPolicy::uniform(1, 1)});
    for (double lam : {0.0, 0.3, 1.0})
      CHECK(bee_policy_evaluation(m, QTable(1, 1), mu, TabularPolicy::uniform(1, 1), {lam, 0.0}, tol).q(0, 0) ==
            doctest::Approx(2.0).epsilon(1e-9));
  }
  SUBCASE("unique fixed point from two starts") {
    Rng rng(9);
    const auto m = build_random_mdp(6, 3, 0.9, 21);
    const auto mu = MixturePolicy::uniform({TabularPolicy::deterministic({0, 1, 2, 0, 1, 2}, 3)});
    const auto pi = random_policy(6, 3, rng);
    const auto a = bee_policy_evaluation(m, QTable(6, 3), mu, pi, {0.4, 0.1}, tol);
    const auto b = bee_policy_evaluation(m, random_qtable(6, 3, 4), mu, pi, {0.4, 0.1}, tol);
    CHECK(max_abs_diff(a.q, b.q) <= 2 * tol * 10);
  }
  SUBCASE("lambda 1 with full support is the optimal Q") {
    const auto m = build_random_mdp(6, 3, 0.9, 22);
    std::vector<TabularPolicy> members;
    for (int a = 0; a < 3; ++a) members.push_back(TabularPolicy::deterministic(std::vector<int>(6, a), 3));
    const auto mu = MixturePolicy::uniform(members);
    const auto fp = bee_policy_evaluation(m, QTable(6, 3), mu, TabularPolicy::uniform(6, 3), {1.0, 0.0}, tol);
    CHECK(max_abs_diff(fp.q, value_iteration_oracle(m, tol)) <= 1e-8);
  }
}

TEST_CASE("BEE policy iteration") {
  SUBCASE("chain: greedy policy picks the rewarding action") {
    const auto r = bee_policy_iteration(chain(0.5), {0.5, 0.0}, 50);
    CHECK(r.converged);
    CHECK(r.policy(0, 1) == 1.0);
  }
  SUBCASE("monotone and optimal on random MDPs") {
    for (int i = 0; i < 50; ++i) {
      const auto m = build_random_mdp(2 + i % 9, 2 + i % 4, 0.9, 500 + i);
      const auto r = bee_policy_iteration(m, {0.5, 0.0}, 200, 1e-12);
      REQUIRE(r.converged);
      CHECK(max_abs_diff(r.q, value_iteration_oracle(m, 1e-12)) <= 1e-6);
      for (std::size_t k = 1; k < r.trace.size(); ++k)
        for (std::size_t j = 0; j < r.q.data().size(); ++j) CHECK(r.trace[k].data()[j] >= r.trace[k - 1].data()[j] - 1e-9);
    }
  }
  SUBCASE("single-action MDPs stop after one improvement step") {
    const auto m = build_random_mdp(5, 1, 0.9, 77);
    const auto r = bee_policy_iteration(m, {0.5, 0.0}, 50);
    CHECK(r.converged);
    CHECK(r.iterations == 1);
  }
}
