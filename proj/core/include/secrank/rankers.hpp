#ifndef SECRANK_RANKERS_HPP
#define SECRANK_RANKERS_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "secrank/instance.hpp"
#include "secrank/metrics.hpp"
#include "secrank/order_structures.hpp"
#include "secrank/rng.hpp"

namespace secrank {

/// The only window an online ranker gets onto the input: pairwise comparisons
/// of the element arriving now against elements that already arrived. Queries
/// about later arrivals throw OnlineConstraintError; every query is counted.
class ComparisonOracle {
 public:
  explicit ComparisonOracle(const Instance& instance) : instance_(&instance) {}

  void begin_step(std::size_t t) { step_ = t; }
  std::size_t current_step() const { return step_; }
  std::uint64_t query_count() const { return queries_; }

  /// Is the element arriving now smaller than the one that arrived at step
  /// prior (0-based, prior < current step)?
  bool current_less_than(std::size_t prior) const {
    if (prior >= step_) {
      throw OnlineConstraintError(
          "comparison against an element that has not arrived");
    }
    ++queries_;
    return instance_->arrivals[step_] < instance_->arrivals[prior];
  }

 private:
  const Instance* instance_;
  std::size_t step_ = 0;
  mutable std::uint64_t queries_ = 0;
};

/// Contract shared by every placement algorithm. place() is called once per
/// arrival with t = 0..n-1 in order; the positions returned over a full run
/// are distinct members of [1..m].
class OnlineRanker {
 public:
  virtual ~OnlineRanker() = default;

  /// Throws ConfigError when (n, m) violates the algorithm's shape
  /// requirements.
  virtual void init(std::size_t n, Position m, Rng rng) = 0;

  virtual Position place(std::size_t t, ComparisonOracle& cmp) = 0;

  virtual std::uint64_t overflow_count() const { return 0; }
};

/// One step of the estimate-then-assign ranker.
struct DenseStep {
  std::size_t relative_rank = 0;  // arrived elements smaller than this one
  double noisy_estimate = 0.0;    // draw in [r*m/t, (r+1)*m/t]
  Position estimated_rank = 0;    // ceil of the draw clamped into [1..m]
  Position position = 0;          // nearest free slot actually taken
};

/// Estimate-then-assign: compute the relative rank of the arrival among its
/// predecessors, rescale to the position range with uniform noise, then take
/// the nearest free position. With noise disabled the midpoint of the
/// rescaling interval is used instead (the ablation baseline). m = n is the
/// classic setting; m > n stretches the estimate by m/n (the scaled variant).
class DenseRanker : public OnlineRanker {
 public:
  explicit DenseRanker(bool with_noise = true) : with_noise_(with_noise) {}

  void init(std::size_t n, Position m, Rng rng) override;
  Position place(std::size_t t, ComparisonOracle& cmp) override;

  const std::vector<DenseStep>& steps() const { return steps_; }

 private:
  bool with_noise_;
  std::size_t n_ = 0;
  Position m_ = 0;
  std::optional<Rng> rng_;
  RelativeRankIndex<std::size_t> arrived_;
  std::optional<FreePositionSet> free_;
  std::vector<DenseStep> steps_;
};

/// Ignores all comparisons and drops each arrival on a uniformly random free
/// position. The quadratic-cost baseline.
class RandomPlacementRanker : public OnlineRanker {
 public:
  void init(std::size_t n, Position m, Rng rng) override;
  Position place(std::size_t t, ComparisonOracle& cmp) override;

 private:
  // Small universes keep an explicit shuffled pool; huge ones draw by
  // rejection against the taken set.
  static constexpr Position kPoolLimit = Position{1} << 22;
  std::size_t n_ = 0;
  Position m_ = 0;
  std::optional<Rng> rng_;
  std::vector<Position> pool_;
  std::unordered_map<Position, bool> taken_;
};

struct TreeStep {
  unsigned depth = 0;
  Position position = 0;
  bool overflow = false;
};

/// Where an element ended up inside the tree ranker, for inversion
/// classification in tests and reports.
struct TreePlacementOrigin {
  enum Kind { kInternalNode, kLeaf, kOverflow } kind = kInternalNode;
  std::uint64_t leaf_id = 0;  // heap index, meaningful for kLeaf
};

/// Search-tree ranker: a complete binary tree of the given height laid out
/// over [1..m] in symmetric order. Internal nodes own a single position;
/// each leaf owns a block of `width` consecutive positions managed by a
/// leaf-local estimate-then-assign instance scaled to the block width.
/// width = 1 gives the pure tree ranker for the position-rich regime
/// (m = 2^(h+1) - 1); larger widths give the hybrid. A full leaf (or a
/// stolen slot) falls back to the nearest globally free position and bumps
/// the overflow counter.
class TreeRanker : public OnlineRanker {
 public:
  TreeRanker(unsigned height, std::uint64_t width)
      : height_(height), width_(width) {}

  /// Pure-tree shape: block width 1 and m = 2^(h+1) - 1.
  static std::unique_ptr<TreeRanker> pure(unsigned height) {
    return std::make_unique<TreeRanker>(height, 1);
  }

  void init(std::size_t n, Position m, Rng rng) override;
  Position place(std::size_t t, ComparisonOracle& cmp) override;
  std::uint64_t overflow_count() const override { return overflows_; }

  const std::vector<TreeStep>& steps() const { return steps_; }
  const std::vector<TreePlacementOrigin>& origins() const { return origins_; }

  /// Positions covered by tree nodes; <= m, remaining slots serve overflow.
  Position layout_width() const { return subtree_width_[0]; }

 private:
  struct LeafState {
    RelativeRankIndex<std::size_t> arrived;
    std::uint64_t count = 0;
  };

  Position claim(Position preferred, unsigned depth, bool* fell_back);

  unsigned height_;
  std::uint64_t width_;
  Position m_ = 0;
  std::optional<Rng> rng_;
  std::optional<FreePositionSet> free_;
  std::vector<Position> subtree_width_;  // indexed by depth, 0..height
  std::unordered_map<std::uint64_t, std::size_t> occupant_;  // node -> arrival
  std::unordered_map<std::uint64_t, LeafState> leaves_;
  std::uint64_t overflows_ = 0;
  std::vector<TreeStep> steps_;
  std::vector<TreePlacementOrigin> origins_;
};

// ---------------------------------------------------------------------------
// Algorithm selection and construction.
// ---------------------------------------------------------------------------

enum class Algorithm {
  kDense,
  kScaledDense,
  kNoiseless,
  kRandom,
  kSparse,
  kGeneral,
};

const char* to_string(Algorithm algorithm);
Algorithm algorithm_from_string(std::string_view name);

/// Tree shape for the hybrid ranker on a given (n, m).
struct TreeHeightChoice {
  double alpha = 0.0;
  unsigned height = 0;
  std::uint64_t width = 0;
};

/// Picks height h = round(alpha * height_exponent(alpha) * ln n) from the
/// solved alpha, clamped so that h >= 1 and the block width
/// floor(m / 2^h) - 1 stays >= 1. Requires m >= 10 n ln n (ConfigError).
TreeHeightChoice choose_tree_height(std::size_t n, std::uint64_t m);

struct RankerOptions {
  std::optional<unsigned> height;       // sparse/general tree height override
  std::optional<std::uint64_t> width;   // general block width override
};

/// Builds a ranker shaped for (n, m) and validates the algorithm's shape
/// requirements (kDense and kNoiseless need m = n; kSparse needs
/// m = 2^(h+1) - 1, with h taken from the options or inferred from m;
/// kGeneral takes height/width from the options or from
/// choose_tree_height). Callers still init(n, m, rng) the result.
std::unique_ptr<OnlineRanker> make_ranker(Algorithm algorithm, std::size_t n,
                                          Position m,
                                          const RankerOptions& options = {});

/// Drives a ranker over a full instance and returns the resulting placement.
PlacementMap run_online(OnlineRanker& ranker, const Instance& instance);

}  // namespace secrank

#endif  // SECRANK_RANKERS_HPP
