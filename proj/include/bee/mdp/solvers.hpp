#pragma once

#include <optional>

#include "bee/mdp/tabular_mdp.hpp"

namespace bee::mdp {

inline constexpr double kDefaultTol = 1e-10;

/// One Jacobi sweep of the Bellman optimality operator T*.
QTable optimality_backup(const TabularMdp& mdp, const QTable& q);

/// One Jacobi sweep of the evaluation operator under `policy`.
QTable evaluation_backup(const TabularMdp& mdp, const QTable& q, const TabularPolicy& policy);

/// Q* by repeated optimality sweeps; the result satisfies ||T*Q - Q||_inf <= tol.
QTable value_iteration_oracle(const TabularMdp& mdp, double tol = kDefaultTol);

/// Q^π by repeated evaluation sweeps; ||T^π Q - Q||_inf <= tol.
QTable exact_policy_evaluation(const TabularMdp& mdp, const TabularPolicy& policy, double tol = kDefaultTol);

/// Deterministic argmax policy, optionally restricted to `support`; ties go to the lowest index.
TabularPolicy greedy_policy(const QTable& q, const std::optional<SupportMask>& support = std::nullopt);

/// V(s) = max_a Q(s,a).
ValueTable state_values(const QTable& q);

}  // namespace bee::mdp
