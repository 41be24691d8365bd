#include <doctest.h>

#include <filesystem>
#include <set>

#include "bee/errors.hpp"
#include "bee/replay/replay_buffer.hpp"

using namespace bee;
using namespace bee::replay;

namespace {

Transition item(double id) { return {{id}, {0.0}, id, {id + 0.5}, false}; }

}  // namespace

TEST_CASE("ring semantics") {
  ReplayBuffer b(2, 1, 1);
  b.push(item(1));
  b.push(item(2));
  b.push(item(3));
  CHECK(b.size() == 2);
  CHECK(b.at(0).reward == 2.0);
  CHECK(b.at(1).reward == 3.0);
}

TEST_CASE("sampling returns stored items only") {
  ReplayBuffer b(10, 1, 1);
  b.push(item(7));
  b.push(item(8));
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const double r = b.sample_batch(1, rng)[0].reward;
    CHECK((r == 7.0 || r == 8.0));
  }
  ReplayBuffer one(4, 1, 1);
  one.push(item(4));
  const auto batch = one.sample_batch(4, rng);
  CHECK(batch.size() == 4);
  for (const auto& t : batch) CHECK(t == item(4));
}

TEST_CASE("size never exceeds capacity") {
  ReplayBuffer b(37, 1, 1);
  for (int i = 0; i < 100000; ++i) {
    b.push(item(i));
    REQUIRE(b.size() <= 37);
  }
  CHECK(b.at(0).reward == 100000 - 37);
}

TEST_CASE("uniform sampling") {
  ReplayBuffer b(10, 1, 1);
  for (int i = 0; i < 10; ++i) b.push(item(i));
  Rng rng(123);
  std::vector<int> counts(10, 0);
  const int n = 100000;
  for (int idx : b.sample_indices(n, rng)) ++counts[idx];
  for (int c : counts) CHECK(std::abs(c / double(n) - 0.1) <= 0.003);
}

TEST_CASE("equal seeds give equal batches") {
  ReplayBuffer b(50, 1, 1);
  for (int i = 0; i < 50; ++i) b.push(item(i));
  Rng r1(9), r2(9);
  CHECK(b.sample_indices(64, r1) == b.sample_indices(64, r2));
}

TEST_CASE("batch layout and terminal mask") {
  ReplayBuffer b(4, 2, 1);
  b.push({{1, 2}, {0.5}, 3.0, {4, 5}, true});
  const auto batch = b.gather({0});
  CHECK(batch.states(1, 0) == 2.0);
  CHECK(batch.next_states(0, 0) == 4.0);
  CHECK(batch.not_done[0] == 0.0);
  CHECK_THROWS_AS(b.push({{1}, {0.5}, 0.0, {1}, false}), ArgumentError);
  ReplayBuffer empty(4, 1, 1);
  Rng rng(1);
  CHECK_THROWS_AS(empty.sample(1, rng), StateError);
}

TEST_CASE("trajectory injection") {
  SUBCASE("15 trajectories of 160 steps") {
    ReplayBuffer b(5000, 1, 1);
    std::vector<std::vector<Transition>> trajs(15, std::vector<Transition>(160, item(1)));
    CHECK(b.inject_trajectories(trajs) == 2400);
    CHECK(b.size() == 2400);
  }
  SUBCASE("empty list is a no-op") {
    ReplayBuffer b(5, 1, 1);
    b.push(item(1));
    CHECK(b.inject_trajectories({}) == 0);
    CHECK(b.size() == 1);
  }
  SUBCASE("overflow evicts the oldest pre-existing entries first") {
    ReplayBuffer b(4, 1, 1);
    for (int i = 0; i < 4; ++i) b.push(item(i));
    b.inject_trajectories({{item(10), item(11)}});
    CHECK(b.at(0).reward == 2.0);
    CHECK(b.at(1).reward == 3.0);
    CHECK(b.at(3).reward == 11.0);
  }
}

TEST_CASE("save and load round-trip") {
  const auto path = (std::filesystem::temp_directory_path() / "bee_replay_roundtrip.bin").string();
  ReplayBuffer b(8, 2, 1);
  for (int i = 0; i < 5; ++i) b.push({{double(i), -double(i)}, {0.1 * i}, 1.0 / 3.0 * i, {i + 1.0, 0.0}, i == 4});
  b.save(path);
  const auto c = ReplayBuffer::load(path, 8);
  REQUIRE(c.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(c.at(i) == b.at(i));
  CHECK(ReplayBuffer::load_transitions(path).size() == 5);
  std::filesystem::remove(path);
}
