#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace bee::mdp {

/// One entry of a sparse transition row.
struct Outcome {
  int next;
  double prob;
};

/**
 * Finite discounted MDP with a sparse transition kernel.
 *
 * Rows are stored per (state, action) pair so that large discretizations
 * (the particle oracle has ~10^4 states) stay cheap; `probability()` gives
 * the dense view P(s'|s,a). Terminal states are zero-reward self-loops, so
 * one backup implementation serves episodic and continuing problems.
 */
class TabularMdp {
 public:
  TabularMdp(int n_states, int n_actions, double discount);

  /// Build from a dense [s][a][s'] table and [s][a] rewards. Validates everything.
  static TabularMdp from_dense(const std::vector<std::vector<std::vector<double>>>& transition,
                               const std::vector<std::vector<double>>& reward, double discount,
                               std::vector<bool> terminal_mask = {});

  int n_states() const { return n_states_; }
  int n_actions() const { return n_actions_; }
  double discount() const { return discount_; }
  double r_max() const { return r_max_; }

  double reward(int s, int a) const { return reward_[index(s, a)]; }
  std::span<const Outcome> outcomes(int s, int a) const { return rows_[index(s, a)]; }
  double probability(int s, int a, int next) const;
  bool terminal(int s) const { return terminal_[s]; }

  /// Replace the row for (s, a). Probabilities must be nonnegative and sum to 1 within 1e-12.
  void set_row(int s, int a, std::vector<Outcome> row, double reward);
  /// Turn `s` into an absorbing zero-reward state.
  void make_terminal(int s);

  /// Throws ArgumentError if any invariant is broken.
  void validate() const;

 private:
  std::size_t index(int s, int a) const { return static_cast<std::size_t>(s) * n_actions_ + a; }

  int n_states_;
  int n_actions_;
  double discount_;
  double r_max_ = 0.0;
  std::vector<std::vector<Outcome>> rows_;
  std::vector<double> reward_;
  std::vector<bool> terminal_;
};

/// Dense state-action table.
class QTable {
 public:
  QTable() = default;
  QTable(int n_states, int n_actions, double fill = 0.0)
      : n_states_(n_states), n_actions_(n_actions),
        values_(static_cast<std::size_t>(n_states) * n_actions, fill) {}

  int n_states() const { return n_states_; }
  int n_actions() const { return n_actions_; }

  double& operator()(int s, int a) { return values_[static_cast<std::size_t>(s) * n_actions_ + a]; }
  double operator()(int s, int a) const { return values_[static_cast<std::size_t>(s) * n_actions_ + a]; }
  std::span<const double> row(int s) const {
    return {values_.data() + static_cast<std::size_t>(s) * n_actions_, static_cast<std::size_t>(n_actions_)};
  }
  std::vector<double>& data() { return values_; }
  const std::vector<double>& data() const { return values_; }

  bool same_shape(const QTable& other) const {
    return n_states_ == other.n_states_ && n_actions_ == other.n_actions_;
  }

 private:
  int n_states_ = 0;
  int n_actions_ = 0;
  std::vector<double> values_;
};

using ValueTable = std::vector<double>;

/// Boolean state-action table; the tabular stand-in for supp(μ).
class SupportMask {
 public:
  SupportMask() = default;
  SupportMask(int n_states, int n_actions, bool fill = false)
      : n_states_(n_states), n_actions_(n_actions),
        bits_(static_cast<std::size_t>(n_states) * n_actions, fill ? 1 : 0) {}

  int n_states() const { return n_states_; }
  int n_actions() const { return n_actions_; }
  bool operator()(int s, int a) const { return bits_[static_cast<std::size_t>(s) * n_actions_ + a] != 0; }
  void set(int s, int a, bool v = true) { bits_[static_cast<std::size_t>(s) * n_actions_ + a] = v ? 1 : 0; }
  bool any(int s) const;
  std::size_t count() const;

 private:
  int n_states_ = 0;
  int n_actions_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// π(a|s) stored densely.
class TabularPolicy {
 public:
  TabularPolicy() = default;
  TabularPolicy(int n_states, int n_actions);

  static TabularPolicy uniform(int n_states, int n_actions);
  static TabularPolicy deterministic(const std::vector<int>& actions, int n_actions);

  int n_states() const { return probs_.n_states(); }
  int n_actions() const { return probs_.n_actions(); }
  double operator()(int s, int a) const { return probs_(s, a); }
  double& operator()(int s, int a) { return probs_(s, a); }
  std::span<const double> row(int s) const { return probs_.row(s); }

  /// Throws ArgumentError unless every row is a distribution (sum 1 ± 1e-12, nonnegative).
  void validate() const;
  bool operator==(const TabularPolicy& other) const { return probs_.data() == other.probs_.data(); }

 private:
  QTable probs_;
};

/// Convex combination of historical policies; only its support feeds the exploit backup.
class MixturePolicy {
 public:
  MixturePolicy() = default;
  MixturePolicy(std::vector<TabularPolicy> members, std::vector<double> weights);

  /// Equal weights over `members`.
  static MixturePolicy uniform(std::vector<TabularPolicy> members);

  /// Append a policy and reset all weights to 1/k.
  void append_uniform(TabularPolicy policy);

  const std::vector<TabularPolicy>& members() const { return members_; }
  const std::vector<double>& weights() const { return weights_; }
  const SupportMask& support() const { return support_; }
  double probability(int s, int a) const;

 private:
  void rebuild_support();

  std::vector<TabularPolicy> members_;
  std::vector<double> weights_;
  SupportMask support_;
};

/// Random test fixture: rewards U[-1,1], transition rows from a flat Dirichlet.
TabularMdp build_random_mdp(int n_states, int n_actions, double discount, std::uint64_t seed);

/// Uniform random Q table (entries in [lo, hi]).
QTable random_qtable(int n_states, int n_actions, std::uint64_t seed, double lo = -10.0, double hi = 10.0);

double max_abs_diff(const QTable& a, const QTable& b);

}  // namespace bee::mdp
