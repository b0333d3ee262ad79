#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <vector>

#include "secrank/errors.hpp"
#include "secrank/order_structures.hpp"
#include "secrank/rng.hpp"

using namespace secrank;

TEST_CASE("rank_below on an empty index is zero") {
  RelativeRankIndex<int> index;
  CHECK(index.rank_below(0) == 0);
  CHECK(index.rank_below(1 << 30) == 0);
  CHECK(index.empty());
}

TEST_CASE("rank_below counts strictly smaller keys") {
  RelativeRankIndex<int> index;
  index.insert(2);
  index.insert(7);
  CHECK(index.rank_below(5) == 1);
  CHECK(index.rank_below(2) == 0);
  CHECK(index.rank_below(8) == 2);
  CHECK(index.size() == 2);
}

TEST_CASE("rank of a missing key inside a dense range") {
  for (int k : {1, 17, 50, 100}) {
    RelativeRankIndex<int> index;
    for (int v = 1; v <= 100; ++v) {
      if (v != k) index.insert(v);
    }
    CHECK(index.rank_below(k) == static_cast<std::size_t>(k - 1));
  }
}

TEST_CASE("insert then query across the gap") {
  RelativeRankIndex<int> index;
  index.insert(5);
  CHECK(index.rank_below(7) == 1);
}

TEST_CASE("duplicate insert throws") {
  RelativeRankIndex<int> index;
  index.insert(5);
  CHECK_THROWS_AS(index.insert(5), DuplicateKeyError);
}

TEST_CASE("rank_below matches a naive scan under random insertion") {
  Rng rng({321, 0});
  const std::size_t n = 4096;
  std::vector<std::uint32_t> keys(n);
  std::iota(keys.begin(), keys.end(), 1);
  for (std::size_t i = keys.size(); i > 1; --i) {
    std::swap(keys[i - 1], keys[rng.uniform_below(i)]);
  }

  RelativeRankIndex<std::uint32_t> index;
  std::vector<std::uint32_t> stored;
  for (std::uint32_t key : keys) {
    index.insert(key);
    stored.push_back(key);
  }
  for (int probe = 0; probe < 100; ++probe) {
    const auto key = static_cast<std::uint32_t>(1 + rng.uniform_below(n + 10));
    const auto naive = static_cast<std::size_t>(
        std::count_if(stored.begin(), stored.end(),
                      [key](std::uint32_t v) { return v < key; }));
    CHECK(index.rank_below(key) == naive);
  }
}

TEST_CASE("per-call comparator orders opaque ids through a side table") {
  // The rankers store arrival ids and order them via the comparison oracle;
  // here a plain lookup table plays that role.
  const std::vector<int> value_of = {50, 10, 40, 20, 30};
  const auto less = [&](std::size_t a, std::size_t b) {
    return value_of[a] < value_of[b];
  };
  RelativeRankIndex<std::size_t> index;
  const std::size_t expected_rank[] = {0, 0, 1, 1, 2};
  for (std::size_t id = 0; id < value_of.size(); ++id) {
    CHECK(index.rank_below(id, less) == expected_rank[id]);
    index.insert(id, less);
  }
  CHECK(index.size() == value_of.size());
}

TEST_CASE("free set returns the target when it is free") {
  FreePositionSet set(9);
  CHECK(set.nearest_free(5) == 5);
  CHECK(set.size() == 9);
}

TEST_CASE("nearest_free picks the closer side") {
  FreePositionSet set(10);
  for (Position p : {1, 2, 4, 5, 6, 7, 8, 10}) set.take(p);
  // free = {3, 9}; target 5 is closer to 3
  CHECK(set.nearest_free(5) == 3);
}

TEST_CASE("equidistant candidates resolve to the smaller position") {
  FreePositionSet set(9);
  for (Position p : {1, 2, 3, 5, 7, 8, 9}) set.take(p);
  // free = {4, 6}
  CHECK(set.nearest_free(5) == 4);
}

TEST_CASE("take removes the slot and the low tie-break shows") {
  FreePositionSet set(9);
  set.take(5);
  CHECK_FALSE(set.contains(5));
  CHECK(set.nearest_free(5) == 4);
  CHECK_THROWS_AS(set.take(5), PositionNotFreeError);
}

TEST_CASE("draining the set leaves nothing to query") {
  FreePositionSet set(17);
  Rng rng({6, 6});
  std::vector<Position> order(17);
  std::iota(order.begin(), order.end(), 1);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.uniform_below(i)]);
  }
  for (Position p : order) set.take(p);
  CHECK(set.empty());
  CHECK_THROWS_AS(set.nearest_free(4), EmptyFreeSetError);
}

TEST_CASE("nearest_free_in respects range bounds") {
  FreePositionSet set(100);
  set.take(50);
  CHECK(set.nearest_free_in(50, 40, 60) == Position{49});
  for (Position p = 40; p <= 60; ++p) {
    if (p != 50) set.take(p);
  }
  CHECK_FALSE(set.nearest_free_in(50, 40, 60).has_value());
  CHECK(set.nearest_free_in(50, 1, 100) == Position{39});
  CHECK(set.nearest_free_in(95, 61, 100) == Position{95});
}

TEST_CASE("interleaved take and nearest_free match a linear scan") {
  for (std::uint32_t round = 0; round < 4; ++round) {
    Rng rng({2024, round});
    const Position m = 64 + rng.uniform_below(512);
    FreePositionSet set(m);
    std::vector<char> model(m + 1, 1);
    std::uint64_t free_left = m;

    for (int op = 0; op < 1000 && free_left > 0; ++op) {
      const Position target = 1 + rng.uniform_below(m);
      Position best = 0;
      std::uint64_t best_dist = ~std::uint64_t{0};
      for (Position p = 1; p <= m; ++p) {
        if (!model[p]) continue;
        const std::uint64_t dist = p > target ? p - target : target - p;
        if (dist < best_dist) {
          best_dist = dist;
          best = p;
        }
      }
      const Position got = set.nearest_free(target);
      REQUIRE(got == best);
      if (rng.coin()) {
        set.take(got);
        model[got] = 0;
        --free_left;
      }
    }
  }
}

TEST_CASE("a huge universe stays cheap to represent") {
  FreePositionSet set(Position{1} << 40);
  set.take(Position{1} << 39);
  CHECK(set.nearest_free(Position{1} << 39) == (Position{1} << 39) - 1);
  CHECK(set.size() == (Position{1} << 40) - 1);
}

TEST_CASE("a million mixed operations complete within seconds") {
  const auto start = std::chrono::steady_clock::now();

  const std::size_t ops = 1000000;
  Rng rng({31337, 0});
  FreePositionSet set(ops);
  RelativeRankIndex<std::uint64_t> index;
  std::uint64_t inserted = 0;
  std::uint64_t sink = 0;
  for (std::size_t i = 0; i < ops; ++i) {
    const Position target = 1 + rng.uniform_below(ops);
    if ((i & 1) == 0) {
      const Position p = set.nearest_free(target);
      set.take(p);
      sink += p;
    } else {
      sink += index.rank_below(target);
      if (((i >> 1) & 1) == 0) {
        index.insert(++inserted);  // sequential keys: AVL worst-ish case
      }
    }
  }
  CHECK(sink != 0);

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  CHECK(seconds < 30.0);
  MESSAGE("1e6 mixed ops took ", seconds, "s");
}
