#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bee/random.hpp"

namespace bee::replay {

struct Transition {
  std::vector<double> state;
  std::vector<double> action;
  double reward = 0.0;
  std::vector<double> next_state;
  bool terminated = false;

  bool operator==(const Transition&) const = default;
};

/// Column-per-sample view of a minibatch, the layout the networks consume.
struct Batch {
  Eigen::MatrixXd states;       ///< obs_dim x n
  Eigen::MatrixXd actions;      ///< act_dim x n
  Eigen::VectorXd rewards;      ///< n
  Eigen::MatrixXd next_states;  ///< obs_dim x n
  Eigen::VectorXd not_done;     ///< n; 0 on terminated rows

  int size() const { return static_cast<int>(rewards.size()); }
};

/**
 * Fixed-capacity FIFO ring of transitions. Sampling is uniform with
 * replacement over the current contents, so the buffer is the operational
 * realization of the historical policy mixture.
 */
class ReplayBuffer {
 public:
  ReplayBuffer(int capacity, int obs_dim, int act_dim);

  int capacity() const { return capacity_; }
  int size() const { return size_; }
  bool empty() const { return size_ == 0; }
  int obs_dim() const { return obs_dim_; }
  int act_dim() const { return act_dim_; }

  void push(const Transition& t);
  void clear();

  /// Transition at logical position `i` (0 = oldest still stored).
  Transition at(int i) const;

  std::vector<int> sample_indices(int n, Rng& rng) const;
  std::vector<Transition> sample_batch(int n, Rng& rng) const;
  Batch gather(const std::vector<int>& logical_indices) const;
  Batch sample(int n, Rng& rng) const { return gather(sample_indices(n, rng)); }

  /// Appends every transition in order; returns how many were added.
  std::size_t inject_trajectories(const std::vector<std::vector<Transition>>& trajectories);

  /// Flat little-endian record stream behind a 16-byte header: "BEER", version, obs_dim, act_dim.
  void save(const std::string& path) const;
  static ReplayBuffer load(const std::string& path, int capacity = 0);
  static std::vector<Transition> load_transitions(const std::string& path);

 private:
  int physical(int logical) const;
  void check(const Transition& t) const;

  int capacity_;
  int obs_dim_;
  int act_dim_;
  int size_ = 0;
  int cursor_ = 0;
  std::vector<double> states_;
  std::vector<double> actions_;
  std::vector<double> rewards_;
  std::vector<double> next_states_;
  std::vector<std::uint8_t> terminated_;
};

}  // namespace bee::replay
