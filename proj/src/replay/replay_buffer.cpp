#include "bee/replay/replay_buffer.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "bee/errors.hpp"

namespace bee::replay {
namespace {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

constexpr char kMagic[4] = {'B', 'E', 'E', 'R'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ofstream& f, std::uint32_t v) { f.write(reinterpret_cast<const char*>(&v), 4); }
std::uint32_t get_u32(std::ifstream& f) {
  std::uint32_t v = 0;
  f.read(reinterpret_cast<char*>(&v), 4);
  return v;
}

struct Header {
  int obs_dim;
  int act_dim;
};

Header read_header(std::ifstream& f, const std::string& path) {
  char magic[4];
  f.read(magic, 4);
  if (!f || std::memcmp(magic, kMagic, 4) != 0) throw ArgumentError(path + ": not a replay buffer file");
  if (get_u32(f) != kVersion) throw ArgumentError(path + ": unsupported replay buffer version");
  Header h{static_cast<int>(get_u32(f)), static_cast<int>(get_u32(f))};
  if (!f || h.obs_dim < 1 || h.act_dim < 1) throw ArgumentError(path + ": corrupt header");
  return h;
}

std::vector<Transition> read_records(std::ifstream& f, const Header& h) {
  const std::size_t width = 2 * h.obs_dim + h.act_dim + 2;
  std::vector<double> rec(width);
  std::vector<Transition> out;
  while (f.read(reinterpret_cast<char*>(rec.data()), static_cast<std::streamsize>(width * sizeof(double)))) {
    Transition t;
    auto it = rec.begin();
    t.state.assign(it, it + h.obs_dim);
    it += h.obs_dim;
    t.action.assign(it, it + h.act_dim);
    it += h.act_dim;
    t.reward = *it++;
    t.next_state.assign(it, it + h.obs_dim);
    it += h.obs_dim;
    t.terminated = *it != 0.0;
    out.push_back(std::move(t));
  }
  if (f.gcount() != 0) throw ArgumentError("truncated replay record");
  return out;
}

}  // namespace

ReplayBuffer::ReplayBuffer(int capacity, int obs_dim, int act_dim)
    : capacity_(capacity), obs_dim_(obs_dim), act_dim_(act_dim) {
  if (capacity < 1) throw ArgumentError("replay capacity must be positive");
  if (obs_dim < 1 || act_dim < 1) throw ArgumentError("replay dims must be positive");
  states_.resize(static_cast<std::size_t>(capacity) * obs_dim);
  next_states_.resize(static_cast<std::size_t>(capacity) * obs_dim);
  actions_.resize(static_cast<std::size_t>(capacity) * act_dim);
  rewards_.resize(capacity);
  terminated_.resize(capacity);
}

void ReplayBuffer::check(const Transition& t) const {
  if (static_cast<int>(t.state.size()) != obs_dim_ || static_cast<int>(t.next_state.size()) != obs_dim_)
    throw ArgumentError("transition state dimension mismatch");
  if (static_cast<int>(t.action.size()) != act_dim_) throw ArgumentError("transition action dimension mismatch");
  if (!std::isfinite(t.reward)) throw ArgumentError("transition reward must be finite");
}

void ReplayBuffer::push(const Transition& t) {
  check(t);
  const std::size_t c = cursor_;
  std::copy(t.state.begin(), t.state.end(), states_.begin() + c * obs_dim_);
  std::copy(t.next_state.begin(), t.next_state.end(), next_states_.begin() + c * obs_dim_);
  std::copy(t.action.begin(), t.action.end(), actions_.begin() + c * act_dim_);
  rewards_[c] = t.reward;
  terminated_[c] = t.terminated ? 1 : 0;
  cursor_ = (cursor_ + 1) % capacity_;
  if (size_ < capacity_) ++size_;
}

void ReplayBuffer::clear() {
  size_ = 0;
  cursor_ = 0;
}

int ReplayBuffer::physical(int logical) const {
  const int oldest = size_ < capacity_ ? 0 : cursor_;
  return (oldest + logical) % capacity_;
}

Transition ReplayBuffer::at(int i) const {
  if (i < 0 || i >= size_) throw ArgumentError("replay index out of range");
  const std::size_t p = physical(i);
  Transition t;
  t.state.assign(states_.begin() + p * obs_dim_, states_.begin() + (p + 1) * obs_dim_);
  t.next_state.assign(next_states_.begin() + p * obs_dim_, next_states_.begin() + (p + 1) * obs_dim_);
  t.action.assign(actions_.begin() + p * act_dim_, actions_.begin() + (p + 1) * act_dim_);
  t.reward = rewards_[p];
  t.terminated = terminated_[p] != 0;
  return t;
}

std::vector<int> ReplayBuffer::sample_indices(int n, Rng& rng) const {
  if (size_ == 0) throw StateError("cannot sample from an empty replay buffer");
  if (n < 1) throw ArgumentError("batch size must be positive");
  std::uniform_int_distribution<int> pick(0, size_ - 1);
  std::vector<int> idx(n);
  for (auto& i : idx) i = pick(rng);
  return idx;
}

std::vector<Transition> ReplayBuffer::sample_batch(int n, Rng& rng) const {
  std::vector<Transition> out;
  for (int i : sample_indices(n, rng)) out.push_back(at(i));
  return out;
}

Batch ReplayBuffer::gather(const std::vector<int>& logical) const {
  const int n = static_cast<int>(logical.size());
  Batch b;
  b.states.resize(obs_dim_, n);
  b.next_states.resize(obs_dim_, n);
  b.actions.resize(act_dim_, n);
  b.rewards.resize(n);
  b.not_done.resize(n);
  for (int j = 0; j < n; ++j) {
    const std::size_t p = physical(logical[j]);
    for (int d = 0; d < obs_dim_; ++d) {
      b.states(d, j) = states_[p * obs_dim_ + d];
      b.next_states(d, j) = next_states_[p * obs_dim_ + d];
    }
    for (int d = 0; d < act_dim_; ++d) b.actions(d, j) = actions_[p * act_dim_ + d];
    b.rewards[j] = rewards_[p];
    b.not_done[j] = terminated_[p] ? 0.0 : 1.0;
  }
  return b;
}

std::size_t ReplayBuffer::inject_trajectories(const std::vector<std::vector<Transition>>& trajectories) {
  for (const auto& traj : trajectories)
    for (const auto& t : traj) check(t);
  std::size_t n = 0;
  for (const auto& traj : trajectories)
    for (const auto& t : traj) {
      push(t);
      ++n;
    }
  return n;
}

void ReplayBuffer::save(const std::string& path) const {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ArgumentError("cannot write " + path);
  f.write(kMagic, 4);
  put_u32(f, kVersion);
  put_u32(f, static_cast<std::uint32_t>(obs_dim_));
  put_u32(f, static_cast<std::uint32_t>(act_dim_));
  for (int i = 0; i < size_; ++i) {
    const Transition t = at(i);
    std::vector<double> rec;
    rec.insert(rec.end(), t.state.begin(), t.state.end());
    rec.insert(rec.end(), t.action.begin(), t.action.end());
    rec.push_back(t.reward);
    rec.insert(rec.end(), t.next_state.begin(), t.next_state.end());
    rec.push_back(t.terminated ? 1.0 : 0.0);
    f.write(reinterpret_cast<const char*>(rec.data()), static_cast<std::streamsize>(rec.size() * sizeof(double)));
  }
}

std::vector<Transition> ReplayBuffer::load_transitions(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ArgumentError("cannot read " + path);
  const Header h = read_header(f, path);
  return read_records(f, h);
}

ReplayBuffer ReplayBuffer::load(const std::string& path, int capacity) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ArgumentError("cannot read " + path);
  const Header h = read_header(f, path);
  auto records = read_records(f, h);
  const int cap = capacity > 0 ? capacity : std::max<int>(1, static_cast<int>(records.size()));
  ReplayBuffer buf(cap, h.obs_dim, h.act_dim);
  for (const auto& t : records) buf.push(t);
  return buf;
}

}  // namespace bee::replay
