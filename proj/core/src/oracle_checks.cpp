#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <vector>

#include "secrank/analysis.hpp"
#include "secrank/harness.hpp"
#include "secrank/metrics.hpp"
#include "secrank/order_structures.hpp"

namespace secrank {

namespace {

OracleCheck check_inversions_exhaustive() {
  OracleCheck check{"inversions-merge-vs-pairscan-exhaustive", true, ""};
  for (std::size_t n = 1; n <= 6; ++n) {
    std::vector<Position> perm(n);
    std::iota(perm.begin(), perm.end(), Position{1});
    do {
      const PlacementMap placement(perm, n);
      const std::uint64_t fast = count_inversions(placement);
      const std::uint64_t slow = count_inversions_bruteforce(placement);
      if (fast != slow) {
        check.passed = false;
        check.detail = "mismatch at n=" + std::to_string(n);
        return check;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  check.detail = "all permutations up to n=6";
  return check;
}

OracleCheck check_inversions_random(std::uint64_t seed) {
  OracleCheck check{"inversions-merge-vs-pairscan-random", true, ""};
  Rng rng({seed, 1}, RngStream::kAux);
  for (int c = 0; c < 500; ++c) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform_below(512));
    const Position m = n + rng.uniform_below(2 * n);  // injective maps, m >= n
    std::set<Position> chosen;
    while (chosen.size() < n) {
      chosen.insert(1 + rng.uniform_below(m));
    }
    std::vector<Position> positions(chosen.begin(), chosen.end());
    for (std::size_t i = positions.size(); i > 1; --i) {
      std::swap(positions[i - 1], positions[rng.uniform_below(i)]);
    }
    const PlacementMap placement(positions, m);
    if (count_inversions(placement) != count_inversions_bruteforce(placement)) {
      check.passed = false;
      check.detail = "mismatch at case " + std::to_string(c);
      return check;
    }
  }
  check.detail = "500 random maps, n <= 512";
  return check;
}

OracleCheck check_free_set_vs_scan(std::uint64_t seed) {
  OracleCheck check{"free-position-set-vs-linear-scan", true, ""};
  for (std::uint32_t round = 0; round < 5 && check.passed; ++round) {
    Rng rng({seed, 10 + round}, RngStream::kAux);
    const Position m = 50 + rng.uniform_below(200);
    FreePositionSet set(m);
    std::vector<char> model(m + 1, 1);
    std::uint64_t free_left = m;
    for (int op = 0; op < 1000 && free_left > 0; ++op) {
      const Position target = 1 + rng.uniform_below(m);
      // Reference: argmin over |p - target| with the low tie-break.
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
      if (got != best) {
        check.passed = false;
        check.detail = "nearest_free mismatch at op " + std::to_string(op);
        break;
      }
      if (rng.coin()) {
        set.take(got);
        model[got] = 0;
        --free_left;
      }
    }
  }
  if (check.passed) check.detail = "5 random 1000-op sequences";
  return check;
}

OracleCheck check_rank_index_vs_scan(std::uint64_t seed) {
  OracleCheck check{"relative-rank-index-vs-linear-scan", true, ""};
  Rng rng({seed, 20}, RngStream::kAux);
  RelativeRankIndex<std::uint64_t> index;
  std::vector<std::uint64_t> stored;
  for (int op = 0; op < 1000; ++op) {
    const std::uint64_t key = rng.uniform_below(100000);
    const auto naive = static_cast<std::size_t>(
        std::count_if(stored.begin(), stored.end(),
                      [key](std::uint64_t v) { return v < key; }));
    if (index.rank_below(key) != naive) {
      check.passed = false;
      check.detail = "rank_below mismatch at op " + std::to_string(op);
      return check;
    }
    if (std::find(stored.begin(), stored.end(), key) == stored.end()) {
      index.insert(key);
      stored.push_back(key);
    }
  }
  check.detail = "1000-op random sequence";
  return check;
}

OracleCheck check_hypergeom_vs_rational() {
  OracleCheck check{"hypergeom-pmf-vs-exact-rational", true, ""};
  // Pascal's triangle up to 60 stays well inside 64 bits.
  constexpr std::size_t kMax = 60;
  std::vector<std::vector<std::uint64_t>> choose(
      kMax + 1, std::vector<std::uint64_t>(kMax + 1, 0));
  for (std::size_t i = 0; i <= kMax; ++i) {
    choose[i][0] = 1;
    for (std::size_t j = 1; j <= i; ++j) {
      choose[i][j] = choose[i - 1][j - 1] + choose[i - 1][j];
    }
  }
  double worst = 0.0;
  for (std::uint64_t n = 1; n <= kMax; ++n) {
    for (std::uint64_t r = 0; r <= n; ++r) {
      for (std::uint64_t t = 0; t <= n; ++t) {
        for (std::uint64_t k = 0; k <= t; ++k) {
          const double pmf = hypergeom_pmf({n, r, t, k});
          if (k > r || t - k > n - r) {
            if (pmf != 0.0) {
              check.passed = false;
              check.detail = "nonzero pmf outside support";
              return check;
            }
            continue;
          }
          const auto exact = static_cast<double>(
              static_cast<long double>(choose[r][k]) *
              static_cast<long double>(choose[n - r][t - k]) /
              static_cast<long double>(choose[n][t]));
          const double rel = std::abs(pmf - exact) / exact;
          worst = std::max(worst, rel);
          if (rel > 1e-10) {
            check.passed = false;
            std::ostringstream out;
            out << "relative error " << rel << " at n=" << n << " r=" << r
                << " t=" << t << " k=" << k;
            check.detail = out.str();
            return check;
          }
        }
      }
    }
  }
  std::ostringstream out;
  out << "exhaustive n <= 60, worst relative error " << worst;
  check.detail = out.str();
  return check;
}

OracleCheck check_assignment_bound_ratio() {
  OracleCheck check{"assignment-bound-ratio-under-8", true, ""};
  double worst = 0.0;
  // Log-uniform sweep of n in [1e2, 1e6].
  for (int i = 0; i <= 24; ++i) {
    const auto n = static_cast<std::uint64_t>(
        std::llround(std::pow(10.0, 2.0 + static_cast<double>(i) / 6.0)));
    const double ratio = assignment_bound_ratio(n);
    worst = std::max(worst, ratio);
    if (ratio > 8.0) {
      check.passed = false;
      check.detail = "ratio " + std::to_string(ratio) +
                     " at n=" + std::to_string(n);
      return check;
    }
  }
  check.detail = "max ratio " + std::to_string(worst);
  return check;
}

}  // namespace

std::vector<OracleCheck> run_oracle_checks(std::uint64_t seed) {
  std::vector<OracleCheck> checks;
  checks.push_back(check_inversions_exhaustive());
  checks.push_back(check_inversions_random(seed));
  checks.push_back(check_free_set_vs_scan(seed));
  checks.push_back(check_rank_index_vs_scan(seed));
  checks.push_back(check_hypergeom_vs_rational());
  checks.push_back(check_assignment_bound_ratio());
  return checks;
}

}  // namespace secrank
