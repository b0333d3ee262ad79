#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "secrank/instance.hpp"
#include "secrank/metrics.hpp"
#include "secrank/order_structures.hpp"
#include "secrank/rankers.hpp"

using namespace secrank;

static void BM_RelativeRankIndexInsert(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng({1, 0});
  const std::vector<std::uint32_t> keys = random_permutation(n, rng);
  for (auto _ : state) {
    RelativeRankIndex<std::uint32_t> index;
    std::size_t sink = 0;
    for (std::uint32_t key : keys) {
      sink += index.rank_below(key);
      index.insert(key);
    }
    benchmark::DoNotOptimize(sink);
  }
  state.SetComplexityN(static_cast<benchmark::IterationCount>(n));
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(n));
}
BENCHMARK(BM_RelativeRankIndexInsert)->Range(1 << 10, 1 << 20)->Complexity();

static void BM_FreePositionSetChurn(benchmark::State& state) {
  const auto m = static_cast<Position>(state.range(0));
  for (auto _ : state) {
    state.PauseTiming();
    Rng rng({2, 0});
    FreePositionSet set(m);
    state.ResumeTiming();
    Position sink = 0;
    for (Position i = 0; i < m; ++i) {
      const Position p = set.nearest_free(1 + rng.uniform_below(m));
      set.take(p);
      sink += p;
    }
    benchmark::DoNotOptimize(sink);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m));
}
BENCHMARK(BM_FreePositionSetChurn)->Range(1 << 10, 1 << 18);

static void BM_DenseTrial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SeedSpec seed{3, 0};
  const Instance instance =
      generate_instance(n, n, ArrivalMode::kUniformRandom, seed);
  for (auto _ : state) {
    DenseRanker ranker;
    ranker.init(n, n, derive_rng(seed, RngStream::kRanker));
    const PlacementMap placement = run_online(ranker, instance);
    benchmark::DoNotOptimize(placement.positions().data());
  }
  state.SetComplexityN(static_cast<benchmark::IterationCount>(n));
}
BENCHMARK(BM_DenseTrial)->Range(1 << 8, 1 << 13)->Complexity();

static void BM_CountInversions(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng({4, 0});
  std::vector<Position> positions(n);
  std::iota(positions.begin(), positions.end(), Position{1});
  for (std::size_t i = n; i > 1; --i) {
    std::swap(positions[i - 1], positions[rng.uniform_below(i)]);
  }
  const PlacementMap placement(positions, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(count_inversions(placement));
  }
  state.SetComplexityN(static_cast<benchmark::IterationCount>(n));
}
BENCHMARK(BM_CountInversions)->Range(1 << 10, 1 << 18)->Complexity();

BENCHMARK_MAIN();
