#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <vector>

#include "secrank/errors.hpp"
#include "secrank/instance.hpp"
#include "secrank/metrics.hpp"
#include "secrank/rng.hpp"

using namespace secrank;

namespace {

PlacementMap identity(std::size_t n) {
  std::vector<Position> positions(n);
  std::iota(positions.begin(), positions.end(), Position{1});
  return {positions, n};
}

PlacementMap reversal(std::size_t n) {
  std::vector<Position> positions(n);
  for (std::size_t i = 0; i < n; ++i) positions[i] = n - i;
  return {positions, n};
}

PlacementMap random_permutation_placement(std::size_t n, Rng& rng) {
  std::vector<Position> positions(n);
  std::iota(positions.begin(), positions.end(), Position{1});
  for (std::size_t i = n; i > 1; --i) {
    std::swap(positions[i - 1], positions[rng.uniform_below(i)]);
  }
  return {positions, n};
}

}  // namespace

TEST_CASE("identity placement has no inversions and zero footrule") {
  const PlacementMap p = identity(37);
  CHECK(count_inversions(p) == 0);
  CHECK(count_inversions_bruteforce(p) == 0);
  CHECK(footrule(p) == 0);
}

TEST_CASE("full reversal reaches the n(n-1)/2 maximum") {
  const PlacementMap p = reversal(5);
  CHECK(count_inversions(p) == 10);
  CHECK(count_inversions_bruteforce(p) == 10);
}

TEST_CASE("reversal footrule at n=4") {
  CHECK(footrule(reversal(4)) == 8);
}

TEST_CASE("two swapped elements are one inversion") {
  const PlacementMap p({2, 1}, 2);
  CHECK(count_inversions_bruteforce(p) == 1);
  CHECK(count_inversions(p) == 1);
}

TEST_CASE("merge count equals pair scan on every permutation up to n=6") {
  for (std::size_t n = 1; n <= 6; ++n) {
    std::vector<Position> positions(n);
    std::iota(positions.begin(), positions.end(), Position{1});
    do {
      const PlacementMap p(positions, n);
      CHECK(count_inversions(p) == count_inversions_bruteforce(p));
    } while (std::next_permutation(positions.begin(), positions.end()));
  }
}

TEST_CASE("merge count equals pair scan on random maps up to n=512") {
  Rng rng({88, 0});
  for (int c = 0; c < 500; ++c) {
    const std::size_t n = 1 + rng.uniform_below(512);
    const PlacementMap p = random_permutation_placement(n, rng);
    CHECK(count_inversions(p) == count_inversions_bruteforce(p));
  }
}

TEST_CASE("inversions accept sparse position ranges (m > n)") {
  // Kendall distance depends only on relative position order.
  const PlacementMap p({100, 7, 52}, 1000);
  CHECK(count_inversions(p) == 2);
  CHECK(count_inversions_bruteforce(p) == 2);
  CHECK_THROWS_AS(footrule(p), std::domain_error);
}

TEST_CASE("distance bounds hold for random permutations") {
  Rng rng({4711, 0});
  for (int c = 0; c < 10000; ++c) {
    const std::size_t n = 2 + rng.uniform_below(127);
    const PlacementMap p = random_permutation_placement(n, rng);
    const std::uint64_t k = count_inversions(p);
    const std::uint64_t f = footrule(p);
    REQUIRE(k <= f);
    REQUIRE(f <= 2 * k);
    REQUIRE(k <= n * (n - 1) / 2);
  }
}

TEST_CASE("zero inversions only for the order-preserving map") {
  Rng rng({12, 0});
  for (int c = 0; c < 200; ++c) {
    const std::size_t n = 2 + rng.uniform_below(64);
    const PlacementMap p = random_permutation_placement(n, rng);
    const bool sorted =
        std::is_sorted(p.positions().begin(), p.positions().end());
    CHECK((count_inversions(p) == 0) == sorted);
  }
}

TEST_CASE("placement validation rejects broken maps") {
  CHECK_THROWS_AS(PlacementMap({1, 1}, 2), ConfigError);     // not injective
  CHECK_THROWS_AS(PlacementMap({0, 1}, 2), ConfigError);     // below range
  CHECK_THROWS_AS(PlacementMap({1, 3}, 2), ConfigError);     // above range
  CHECK_THROWS_AS(PlacementMap({1, 2, 3}, 2), ConfigError);  // n > m
}
