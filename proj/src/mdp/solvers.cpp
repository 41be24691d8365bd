#include "bee/mdp/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bee/errors.hpp"

namespace bee::mdp {
namespace {

void check_tol(double tol) {
  if (!(tol > 0.0)) throw ArgumentError("tol must be positive");
}

template <class Backup>
QTable iterate_to_fixed_point(const QTable& q0, double tol, Backup&& backup) {
  QTable q = q0;
  for (;;) {
    QTable next = backup(q);
    const double residual = max_abs_diff(next, q);
    q = std::move(next);
    if (residual <= tol) return q;
  }
}

}  // namespace

QTable optimality_backup(const TabularMdp& mdp, const QTable& q) {
  const int ns = mdp.n_states();
  const int na = mdp.n_actions();
  ValueTable v = state_values(q);
  QTable out(ns, na);
  for (int s = 0; s < ns; ++s)
    for (int a = 0; a < na; ++a) {
      double ev = 0.0;
      for (const auto& o : mdp.outcomes(s, a)) ev += o.prob * v[o.next];
      out(s, a) = mdp.reward(s, a) + mdp.discount() * ev;
    }
  return out;
}

QTable evaluation_backup(const TabularMdp& mdp, const QTable& q, const TabularPolicy& policy) {
  const int ns = mdp.n_states();
  const int na = mdp.n_actions();
  ValueTable v(ns, 0.0);
  for (int s = 0; s < ns; ++s)
    for (int a = 0; a < na; ++a)
      if (policy(s, a) > 0.0) v[s] += policy(s, a) * q(s, a);
  QTable out(ns, na);
  for (int s = 0; s < ns; ++s)
    for (int a = 0; a < na; ++a) {
      double ev = 0.0;
      for (const auto& o : mdp.outcomes(s, a)) ev += o.prob * v[o.next];
      out(s, a) = mdp.reward(s, a) + mdp.discount() * ev;
    }
  return out;
}

QTable value_iteration_oracle(const TabularMdp& mdp, double tol) {
  check_tol(tol);
  return iterate_to_fixed_point(QTable(mdp.n_states(), mdp.n_actions()), tol,
                                [&](const QTable& q) { return optimality_backup(mdp, q); });
}

QTable exact_policy_evaluation(const TabularMdp& mdp, const TabularPolicy& policy, double tol) {
  check_tol(tol);
  if (policy.n_states() != mdp.n_states() || policy.n_actions() != mdp.n_actions())
    throw ArgumentError("policy shape does not match MDP");
  return iterate_to_fixed_point(QTable(mdp.n_states(), mdp.n_actions()), tol,
                                [&](const QTable& q) { return evaluation_backup(mdp, q, policy); });
}

TabularPolicy greedy_policy(const QTable& q, const std::optional<SupportMask>& support) {
  const int ns = q.n_states();
  const int na = q.n_actions();
  if (support && (support->n_states() != ns || support->n_actions() != na))
    throw ArgumentError("support mask shape does not match Q");
  TabularPolicy pi(ns, na);
  for (int s = 0; s < ns; ++s) {
    int best = -1;
    double best_v = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < na; ++a) {
      if (support && !(*support)(s, a)) continue;
      if (best < 0 || q(s, a) > best_v) {
        best = a;
        best_v = q(s, a);
      }
    }
    if (best < 0) throw ArgumentError("state " + std::to_string(s) + " has no supported action");
    pi(s, best) = 1.0;
  }
  return pi;
}

ValueTable state_values(const QTable& q) {
  ValueTable v(q.n_states());
  for (int s = 0; s < q.n_states(); ++s) {
    const auto r = q.row(s);
    v[s] = *std::max_element(r.begin(), r.end());
  }
  return v;
}

}  // namespace bee::mdp
