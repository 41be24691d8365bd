#pragma once

#include <optional>
#include <vector>

#include "bee/mdp/solvers.hpp"
#include "bee/mdp/tabular_mdp.hpp"

namespace bee::tabular {

using mdp::MixturePolicy;
using mdp::QTable;
using mdp::SupportMask;
using mdp::TabularMdp;
using mdp::TabularPolicy;

/// λ blends exploitation against exploration; `exploration_weight` scales ω = α·log π.
struct BlendConfig {
  double lambda = 0.5;
  double exploration_weight = 0.0;

  void validate() const;
};

/// What the exploit backup does at a successor state with no supported action.
enum class EmptySupportRule {
  reject,                ///< ArgumentError (exact tabular setting)
  fall_back_to_explore,  ///< use the policy expectation there (sample-based settings)
};

struct BackupOptions {
  EmptySupportRule empty_support = EmptySupportRule::reject;
  /// When set, only masked entries are backed up; the rest are copied from the input.
  const SupportMask* update_mask = nullptr;
};

/// Per-state max of q over supported actions.
std::vector<double> supported_max(const QTable& q, const SupportMask& support);

/// Per-state E_π[q − α log π]; zero-probability actions contribute nothing.
std::vector<double> policy_expectation(const QTable& q, const TabularPolicy& pi, double exploration_weight);

/// r + γ Σ P(s'|s,a) max_{a' ∈ supp(s')} q(s',a').
QTable exploit_backup(const TabularMdp& mdp, const QTable& q, const SupportMask& support,
                      const BackupOptions& opts = {}, const TabularPolicy* fallback_pi = nullptr,
                      double fallback_weight = 0.0);
QTable exploit_backup(const TabularMdp& mdp, const QTable& q, const MixturePolicy& mu);

/// r + γ Σ P(s'|s,a) Σ π(a'|s') [q(s',a') − α log π(a'|s')].
QTable explore_backup(const TabularMdp& mdp, const QTable& q, const TabularPolicy& pi, const BlendConfig& cfg,
                      const BackupOptions& opts = {});

/// λ·exploit + (1−λ)·explore, computed from the two full backups.
QTable bee_backup(const TabularMdp& mdp, const QTable& q, const SupportMask& support, const TabularPolicy& pi,
                  const BlendConfig& cfg, const BackupOptions& opts = {});
QTable bee_backup(const TabularMdp& mdp, const QTable& q, const MixturePolicy& mu, const TabularPolicy& pi,
                  const BlendConfig& cfg);

struct FixedPoint {
  QTable q;
  int sweeps = 0;
};

/// Iterates bee_backup from q0 until ||B Q − Q||_inf <= tol.
FixedPoint bee_policy_evaluation(const TabularMdp& mdp, const QTable& q0, const MixturePolicy& mu,
                                 const TabularPolicy& pi, const BlendConfig& cfg, double tol = mdp::kDefaultTol);

struct PolicyIterationResult {
  QTable q;
  TabularPolicy policy;
  MixturePolicy mixture;
  std::vector<QTable> trace;  ///< Q_k after each evaluation
  int iterations = 0;
  bool converged = false;
};

/**
 * Alternates BEE evaluation with greedy improvement.
 *
 * Starts from the greedy policy of an all-zero table (action 0 everywhere)
 * unless `initial` is given. Every improved policy is appended to the
 * mixture with uniform weights, so the support only grows. Each evaluation
 * warm-starts from the previous fixed point. Stops when the greedy policy
 * repeats; otherwise returns the last iterate with `converged = false`.
 */
PolicyIterationResult bee_policy_iteration(const TabularMdp& mdp, const BlendConfig& cfg, int max_iters,
                                           double tol = mdp::kDefaultTol,
                                           const std::optional<TabularPolicy>& initial = std::nullopt);

}  // namespace bee::tabular
