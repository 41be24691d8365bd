#include "bee/mdp/tabular_mdp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bee/errors.hpp"
#include "bee/random.hpp"

namespace bee::mdp {
namespace {

constexpr double kRowTol = 1e-12;

void check_row(const std::vector<Outcome>& row, int n_states, int s, int a) {
  double sum = 0.0;
  for (const auto& o : row) {
    if (o.next < 0 || o.next >= n_states)
      throw ArgumentError("transition target out of range at (" + std::to_string(s) + "," + std::to_string(a) + ")");
    if (!(o.prob >= 0.0)) throw ArgumentError("negative transition probability");
    sum += o.prob;
  }
  if (std::abs(sum - 1.0) > kRowTol)
    throw ArgumentError("transition row (" + std::to_string(s) + "," + std::to_string(a) +
                        ") sums to " + std::to_string(sum));
}

}  // namespace

TabularMdp::TabularMdp(int n_states, int n_actions, double discount)
    : n_states_(n_states), n_actions_(n_actions), discount_(discount) {
  if (n_states < 1) throw ArgumentError("n_states must be >= 1");
  if (n_actions < 1) throw ArgumentError("n_actions must be >= 1");
  if (!(discount > 0.0 && discount < 1.0)) throw ArgumentError("discount must lie in (0,1)");
  const auto n = static_cast<std::size_t>(n_states) * n_actions;
  rows_.resize(n);
  reward_.assign(n, 0.0);
  terminal_.assign(n_states, false);
  for (int s = 0; s < n_states; ++s)
    for (int a = 0; a < n_actions; ++a) rows_[index(s, a)] = {{s, 1.0}};
}

TabularMdp TabularMdp::from_dense(const std::vector<std::vector<std::vector<double>>>& transition,
                                  const std::vector<std::vector<double>>& reward, double discount,
                                  std::vector<bool> terminal_mask) {
  const int ns = static_cast<int>(transition.size());
  if (ns < 1) throw ArgumentError("empty transition table");
  const int na = static_cast<int>(transition[0].size());
  TabularMdp mdp(ns, na, discount);
  if (static_cast<int>(reward.size()) != ns) throw ArgumentError("reward table has wrong state count");
  for (int s = 0; s < ns; ++s) {
    if (static_cast<int>(transition[s].size()) != na || static_cast<int>(reward[s].size()) != na)
      throw ArgumentError("ragged action dimension");
    for (int a = 0; a < na; ++a) {
      if (static_cast<int>(transition[s][a].size()) != ns) throw ArgumentError("ragged next-state dimension");
      std::vector<Outcome> row;
      for (int n = 0; n < ns; ++n)
        if (transition[s][a][n] != 0.0) row.push_back({n, transition[s][a][n]});
      mdp.set_row(s, a, std::move(row), reward[s][a]);
    }
  }
  if (!terminal_mask.empty()) {
    if (static_cast<int>(terminal_mask.size()) != ns) throw ArgumentError("terminal mask has wrong length");
    for (int s = 0; s < ns; ++s)
      if (terminal_mask[s]) mdp.make_terminal(s);
  }
  mdp.validate();
  return mdp;
}

double TabularMdp::probability(int s, int a, int next) const {
  double p = 0.0;
  for (const auto& o : rows_[index(s, a)])
    if (o.next == next) p += o.prob;
  return p;
}

void TabularMdp::set_row(int s, int a, std::vector<Outcome> row, double reward) {
  if (s < 0 || s >= n_states_ || a < 0 || a >= n_actions_) throw ArgumentError("state/action out of range");
  if (!std::isfinite(reward)) throw ArgumentError("reward must be finite");
  check_row(row, n_states_, s, a);
  rows_[index(s, a)] = std::move(row);
  reward_[index(s, a)] = reward;
  r_max_ = std::max(r_max_, std::abs(reward));
}

void TabularMdp::make_terminal(int s) {
  terminal_[s] = true;
  for (int a = 0; a < n_actions_; ++a) {
    rows_[index(s, a)] = {{s, 1.0}};
    reward_[index(s, a)] = 0.0;
  }
}

void TabularMdp::validate() const {
  for (int s = 0; s < n_states_; ++s) {
    for (int a = 0; a < n_actions_; ++a) {
      check_row(rows_[index(s, a)], n_states_, s, a);
      if (std::abs(reward(s, a)) > r_max_) throw ArgumentError("reward exceeds r_max");
      if (terminal_[s] && (reward(s, a) != 0.0 || probability(s, a, s) != 1.0))
        throw ArgumentError("terminal state " + std::to_string(s) + " is not a zero-reward self-loop");
    }
  }
}

bool SupportMask::any(int s) const {
  for (int a = 0; a < n_actions_; ++a)
    if ((*this)(s, a)) return true;
  return false;
}

std::size_t SupportMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

TabularPolicy::TabularPolicy(int n_states, int n_actions) : probs_(n_states, n_actions, 0.0) {}

TabularPolicy TabularPolicy::uniform(int n_states, int n_actions) {
  TabularPolicy p(n_states, n_actions);
  for (auto& v : p.probs_.data()) v = 1.0 / n_actions;
  return p;
}

TabularPolicy TabularPolicy::deterministic(const std::vector<int>& actions, int n_actions) {
  TabularPolicy p(static_cast<int>(actions.size()), n_actions);
  for (int s = 0; s < static_cast<int>(actions.size()); ++s) {
    if (actions[s] < 0 || actions[s] >= n_actions) throw ArgumentError("action index out of range");
    p(s, actions[s]) = 1.0;
  }
  return p;
}

void TabularPolicy::validate() const {
  for (int s = 0; s < n_states(); ++s) {
    double sum = 0.0;
    for (double p : row(s)) {
      if (!(p >= 0.0)) throw ArgumentError("negative policy probability in state " + std::to_string(s));
      sum += p;
    }
    if (std::abs(sum - 1.0) > kRowTol) throw ArgumentError("policy row " + std::to_string(s) + " does not sum to 1");
  }
}

MixturePolicy::MixturePolicy(std::vector<TabularPolicy> members, std::vector<double> weights)
    : members_(std::move(members)), weights_(std::move(weights)) {
  if (members_.empty()) throw ArgumentError("mixture needs at least one member");
  if (members_.size() != weights_.size()) throw ArgumentError("one weight per mixture member");
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0)) throw ArgumentError("mixture weights must be nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kRowTol) throw ArgumentError("mixture weights must sum to 1");
  for (const auto& m : members_) {
    if (m.n_states() != members_[0].n_states() || m.n_actions() != members_[0].n_actions())
      throw ArgumentError("mixture members disagree on shape");
    m.validate();
  }
  rebuild_support();
}

MixturePolicy MixturePolicy::uniform(std::vector<TabularPolicy> members) {
  std::vector<double> w(members.size(), members.empty() ? 0.0 : 1.0 / static_cast<double>(members.size()));
  return MixturePolicy(std::move(members), std::move(w));
}

void MixturePolicy::append_uniform(TabularPolicy policy) {
  auto members = members_;
  members.push_back(std::move(policy));
  *this = uniform(std::move(members));
}

double MixturePolicy::probability(int s, int a) const {
  double p = 0.0;
  for (std::size_t i = 0; i < members_.size(); ++i) p += weights_[i] * members_[i](s, a);
  return p;
}

void MixturePolicy::rebuild_support() {
  const int ns = members_[0].n_states();
  const int na = members_[0].n_actions();
  support_ = SupportMask(ns, na);
  for (int s = 0; s < ns; ++s)
    for (int a = 0; a < na; ++a) support_.set(s, a, probability(s, a) > 0.0);
}

TabularMdp build_random_mdp(int n_states, int n_actions, double discount, std::uint64_t seed) {
  if (n_states < 1 || n_actions < 1) throw ArgumentError("MDP sizes must be positive");
  if (!(discount > 0.0 && discount < 1.0)) throw ArgumentError("discount must lie in (0,1)");
  TabularMdp mdp(n_states, n_actions, discount);
  Rng rng(seed);
  std::exponential_distribution<double> gamma1(1.0);
  for (int s = 0; s < n_states; ++s) {
    for (int a = 0; a < n_actions; ++a) {
      std::vector<double> w(n_states);
      double total = 0.0;
      for (auto& x : w) {
        x = gamma1(rng);
        total += x;
      }
      std::vector<Outcome> row;
      row.reserve(n_states);
      double acc = 0.0;
      for (int n = 0; n + 1 < n_states; ++n) {
        row.push_back({n, w[n] / total});
        acc += w[n] / total;
      }
      // last entry absorbs rounding so the row sums to 1 to machine precision
      row.push_back({n_states - 1, std::max(0.0, 1.0 - acc)});
      mdp.set_row(s, a, std::move(row), uniform(rng, -1.0, 1.0));
    }
  }
  return mdp;
}

QTable random_qtable(int n_states, int n_actions, std::uint64_t seed, double lo, double hi) {
  QTable q(n_states, n_actions);
  Rng rng(seed);
  for (auto& v : q.data()) v = uniform(rng, lo, hi);
  return q;
}

double max_abs_diff(const QTable& a, const QTable& b) {
  if (!a.same_shape(b)) throw ArgumentError("QTable shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

}  // namespace bee::mdp
