#include "bee/tabular/bee_operator.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "bee/errors.hpp"

namespace bee::tabular {
namespace {

void check_shapes(const TabularMdp& mdp, const QTable& q) {
  if (q.n_states() != mdp.n_states() || q.n_actions() != mdp.n_actions())
    throw ArgumentError("Q table shape does not match MDP");
}

void check_policy(const TabularMdp& mdp, const TabularPolicy& pi) {
  if (pi.n_states() != mdp.n_states() || pi.n_actions() != mdp.n_actions())
    throw ArgumentError("policy shape does not match MDP");
}

QTable backup_with_next_values(const TabularMdp& mdp, const QTable& q, const std::vector<double>& next_value,
                               const BackupOptions& opts) {
  const int ns = mdp.n_states();
  const int na = mdp.n_actions();
  QTable out(ns, na);
  for (int s = 0; s < ns; ++s) {
    for (int a = 0; a < na; ++a) {
      if (opts.update_mask && !(*opts.update_mask)(s, a)) {
        out(s, a) = q(s, a);
        continue;
      }
      double ev = 0.0;
      for (const auto& o : mdp.outcomes(s, a)) ev += o.prob * next_value[o.next];
      out(s, a) = mdp.reward(s, a) + mdp.discount() * ev;
    }
  }
  return out;
}

}  // namespace

void BlendConfig::validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ArgumentError("lambda must lie in [0,1]");
  if (!(exploration_weight >= 0.0)) throw ArgumentError("exploration weight must be >= 0");
}

std::vector<double> supported_max(const QTable& q, const SupportMask& support) {
  std::vector<double> v(q.n_states(), -std::numeric_limits<double>::infinity());
  for (int s = 0; s < q.n_states(); ++s)
    for (int a = 0; a < q.n_actions(); ++a)
      if (support(s, a) && q(s, a) > v[s]) v[s] = q(s, a);
  return v;
}

std::vector<double> policy_expectation(const QTable& q, const TabularPolicy& pi, double exploration_weight) {
  std::vector<double> v(q.n_states(), 0.0);
  for (int s = 0; s < q.n_states(); ++s) {
    double acc = 0.0;
    for (int a = 0; a < q.n_actions(); ++a) {
      const double p = pi(s, a);
      if (p <= 0.0) continue;
      const double omega = exploration_weight > 0.0 ? exploration_weight * std::log(p) : 0.0;
      acc += p * (q(s, a) - omega);
    }
    v[s] = acc;
  }
  return v;
}

QTable exploit_backup(const TabularMdp& mdp, const QTable& q, const SupportMask& support, const BackupOptions& opts,
                      const TabularPolicy* fallback_pi, double fallback_weight) {
  check_shapes(mdp, q);
  if (support.n_states() != mdp.n_states() || support.n_actions() != mdp.n_actions())
    throw ArgumentError("support mask shape does not match MDP");
  std::vector<double> v = supported_max(q, support);
  std::vector<double> fallback;
  for (int s = 0; s < mdp.n_states(); ++s) {
    if (support.any(s)) continue;
    if (opts.empty_support == EmptySupportRule::reject || fallback_pi == nullptr)
      throw ArgumentError("state " + std::to_string(s) + " has empty mixture support");
    if (fallback.empty()) fallback = policy_expectation(q, *fallback_pi, fallback_weight);
    v[s] = fallback[s];
  }
  return backup_with_next_values(mdp, q, v, opts);
}

QTable exploit_backup(const TabularMdp& mdp, const QTable& q, const MixturePolicy& mu) {
  return exploit_backup(mdp, q, mu.support());
}

QTable explore_backup(const TabularMdp& mdp, const QTable& q, const TabularPolicy& pi, const BlendConfig& cfg,
                      const BackupOptions& opts) {
  check_shapes(mdp, q);
  check_policy(mdp, pi);
  cfg.validate();
  return backup_with_next_values(mdp, q, policy_expectation(q, pi, cfg.exploration_weight), opts);
}

QTable bee_backup(const TabularMdp& mdp, const QTable& q, const SupportMask& support, const TabularPolicy& pi,
                  const BlendConfig& cfg, const BackupOptions& opts) {
  cfg.validate();
  const QTable exploit = exploit_backup(mdp, q, support, opts, &pi, cfg.exploration_weight);
  const QTable explore = explore_backup(mdp, q, pi, cfg, opts);
  QTable out(q.n_states(), q.n_actions());
  const double lam = cfg.lambda;
  for (std::size_t i = 0; i < out.data().size(); ++i)
    out.data()[i] = lam * exploit.data()[i] + (1.0 - lam) * explore.data()[i];
  return out;
}

QTable bee_backup(const TabularMdp& mdp, const QTable& q, const MixturePolicy& mu, const TabularPolicy& pi,
                  const BlendConfig& cfg) {
  return bee_backup(mdp, q, mu.support(), pi, cfg);
}

FixedPoint bee_policy_evaluation(const TabularMdp& mdp, const QTable& q0, const MixturePolicy& mu,
                                 const TabularPolicy& pi, const BlendConfig& cfg, double tol) {
  if (!(tol > 0.0)) throw ArgumentError("tol must be positive");
  FixedPoint fp{q0, 0};
  for (;;) {
    QTable next = bee_backup(mdp, fp.q, mu, pi, cfg);
    const double residual = mdp::max_abs_diff(next, fp.q);
    fp.q = std::move(next);
    ++fp.sweeps;
    if (residual <= tol) return fp;
  }
}

PolicyIterationResult bee_policy_iteration(const TabularMdp& mdp, const BlendConfig& cfg, int max_iters, double tol,
                                           const std::optional<TabularPolicy>& initial) {
  if (max_iters < 1) throw ArgumentError("max_iters must be >= 1");
  cfg.validate();
  PolicyIterationResult out;
  out.policy = initial ? *initial : mdp::greedy_policy(QTable(mdp.n_states(), mdp.n_actions()));
  check_policy(mdp, out.policy);
  out.mixture = MixturePolicy::uniform({out.policy});
  out.q = QTable(mdp.n_states(), mdp.n_actions());

  for (int k = 0; k < max_iters; ++k) {
    out.q = bee_policy_evaluation(mdp, out.q, out.mixture, out.policy, cfg, tol).q;
    out.trace.push_back(out.q);
    out.iterations = k + 1;
    TabularPolicy improved = mdp::greedy_policy(out.q);
    if (improved == out.policy) {
      out.converged = true;
      return out;
    }
    out.policy = std::move(improved);
    out.mixture.append_uniform(out.policy);
  }
  return out;
}

}  // namespace bee::tabular
