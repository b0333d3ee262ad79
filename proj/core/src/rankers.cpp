#include "secrank/rankers.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <string>

#include "secrank/analysis.hpp"
#include "secrank/errors.hpp"

namespace secrank {

namespace {

// BST descents only ever compare the probing arrival against stored ones, so
// a single "current element vs prior element" oracle answer suffices.
struct CurrentVsPrior {
  const ComparisonOracle* oracle;
  std::size_t current;
  bool operator()(std::size_t a, std::size_t b) const {
    if (a == current) return oracle->current_less_than(b);
    assert(b == current);
    return !oracle->current_less_than(a);
  }
};

Position clamp_ceil(double x, Position hi) {
  const double c = std::ceil(x);
  if (c < 1.0) return 1;
  if (c >= static_cast<double>(hi)) return hi;
  return static_cast<Position>(c);
}

}  // namespace

// ---------------------------------------------------------------------------
// DenseRanker
// ---------------------------------------------------------------------------

void DenseRanker::init(std::size_t n, Position m, Rng rng) {
  if (n == 0) throw ConfigError("dense ranker: n must be >= 1");
  if (m < n) throw ConfigError("dense ranker: m must be >= n");
  n_ = n;
  m_ = m;
  rng_.emplace(rng);
  arrived_ = {};
  free_.emplace(m);
  steps_.clear();
  steps_.reserve(n);
}

Position DenseRanker::place(std::size_t t, ComparisonOracle& cmp) {
  const CurrentVsPrior less{&cmp, t};
  DenseStep step;
  step.relative_rank = arrived_.rank_below(t, less);

  // Rescale the relative rank to the position range; the noise spreads the
  // estimate uniformly over the whole uncertainty interval.
  const double scale = static_cast<double>(m_) / static_cast<double>(t + 1);
  const double offset = with_noise_ ? rng_->uniform01() : 0.5;
  step.noisy_estimate = (static_cast<double>(step.relative_rank) + offset) * scale;
  step.estimated_rank = clamp_ceil(step.noisy_estimate, m_);

  step.position = free_->nearest_free(step.estimated_rank);
  free_->take(step.position);
  arrived_.insert(t, less);
  steps_.push_back(step);
  return step.position;
}

// ---------------------------------------------------------------------------
// RandomPlacementRanker
// ---------------------------------------------------------------------------

void RandomPlacementRanker::init(std::size_t n, Position m, Rng rng) {
  if (n == 0) throw ConfigError("random ranker: n must be >= 1");
  if (m < n) throw ConfigError("random ranker: m must be >= n");
  n_ = n;
  m_ = m;
  rng_.emplace(rng);
  pool_.clear();
  taken_.clear();
  if (m <= kPoolLimit) {
    pool_.resize(m);
    for (Position p = 1; p <= m; ++p) pool_[p - 1] = p;
  }
}

Position RandomPlacementRanker::place(std::size_t t, ComparisonOracle& cmp) {
  (void)t;
  (void)cmp;  // baseline never looks at comparisons
  if (!pool_.empty()) {
    const std::size_t idx =
        static_cast<std::size_t>(rng_->uniform_below(pool_.size()));
    const Position p = pool_[idx];
    pool_[idx] = pool_.back();
    pool_.pop_back();
    return p;
  }
  // Rejection against the taken set; m here is far larger than n, so the
  // expected number of redraws stays below 2.
  for (;;) {
    const Position p = 1 + rng_->uniform_below(m_);
    if (taken_.emplace(p, true).second) return p;
  }
}

// ---------------------------------------------------------------------------
// TreeRanker
// ---------------------------------------------------------------------------

void TreeRanker::init(std::size_t n, Position m, Rng rng) {
  if (n == 0) throw ConfigError("tree ranker: n must be >= 1");
  if (m < n) throw ConfigError("tree ranker: m must be >= n");
  if (width_ < 1) throw ConfigError("tree ranker: block width must be >= 1");
  if (height_ > 62) throw ConfigError("tree ranker: height too large");

  // Width of a subtree rooted at each depth: leaves hold `width_` slots, an
  // internal node holds one slot plus its two subtrees.
  subtree_width_.assign(height_ + 1, 0);
  subtree_width_[height_] = width_;
  for (unsigned d = height_; d > 0; --d) {
    if (subtree_width_[d] > (~std::uint64_t{0} - 1) / 2) {
      throw ConfigError("tree ranker: layout exceeds the position range");
    }
    subtree_width_[d - 1] = 2 * subtree_width_[d] + 1;
  }
  if (subtree_width_[0] > m) {
    throw ConfigError("tree ranker: layout needs " +
                      std::to_string(subtree_width_[0]) +
                      " positions but m = " + std::to_string(m));
  }

  m_ = m;
  rng_.emplace(rng);
  free_.emplace(m);
  occupant_.clear();
  leaves_.clear();
  overflows_ = 0;
  steps_.clear();
  steps_.reserve(n);
  origins_.clear();
  origins_.reserve(n);
}

Position TreeRanker::claim(Position preferred, unsigned depth,
                           bool* fell_back) {
  *fell_back = !free_->contains(preferred);
  const Position pos =
      *fell_back ? free_->nearest_free(preferred) : preferred;
  if (*fell_back) ++overflows_;
  free_->take(pos);
  steps_.push_back({depth, pos, *fell_back});
  return pos;
}

Position TreeRanker::place(std::size_t t, ComparisonOracle& cmp) {
  std::uint64_t node = 1;
  Position lo = 1;
  unsigned depth = 0;
  while (depth < height_) {
    auto it = occupant_.find(node);
    const Position own = lo + subtree_width_[depth + 1];
    if (it == occupant_.end()) {
      occupant_.emplace(node, t);
      bool fell_back = false;
      const Position pos = claim(own, depth, &fell_back);
      origins_.push_back({TreePlacementOrigin::kInternalNode, node});
      return pos;
    }
    if (cmp.current_less_than(it->second)) {
      node = 2 * node;
    } else {
      lo = own + 1;
      node = 2 * node + 1;
    }
    ++depth;
  }

  // Reached a leaf block [lo, lo + width - 1]: run the block-local
  // estimate-then-assign instance scaled to the block width.
  const Position hi = lo + width_ - 1;
  LeafState& leaf = leaves_[node];
  if (leaf.count < width_) {
    const CurrentVsPrior less{&cmp, t};
    const std::size_t r = leaf.arrived.rank_below(t, less);
    const double scale =
        static_cast<double>(width_) / static_cast<double>(leaf.count + 1);
    const double x = (static_cast<double>(r) + rng_->uniform01()) * scale;
    const Position target = lo - 1 + clamp_ceil(x, width_);
    if (auto pos = free_->nearest_free_in(target, lo, hi)) {
      free_->take(*pos);
      leaf.arrived.insert(t, less);
      ++leaf.count;
      steps_.push_back({height_, *pos, false});
      origins_.push_back({TreePlacementOrigin::kLeaf, node});
      return *pos;
    }
    // Block exhausted early (slots stolen by earlier overflow): fall through.
  }
  ++overflows_;
  const Position mid = lo + (hi - lo) / 2;
  const Position pos = free_->nearest_free(mid);
  free_->take(pos);
  steps_.push_back({height_, pos, true});
  origins_.push_back({TreePlacementOrigin::kOverflow, node});
  return pos;
}

// ---------------------------------------------------------------------------
// Algorithm ids, shape choice, factory
// ---------------------------------------------------------------------------

const char* to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kDense: return "dense";
    case Algorithm::kScaledDense: return "scaled-dense";
    case Algorithm::kNoiseless: return "noiseless";
    case Algorithm::kRandom: return "random";
    case Algorithm::kSparse: return "sparse";
    case Algorithm::kGeneral: return "general";
  }
  return "unknown";
}

Algorithm algorithm_from_string(std::string_view name) {
  if (name == "dense") return Algorithm::kDense;
  if (name == "scaled-dense") return Algorithm::kScaledDense;
  if (name == "noiseless") return Algorithm::kNoiseless;
  if (name == "random") return Algorithm::kRandom;
  if (name == "sparse") return Algorithm::kSparse;
  if (name == "general") return Algorithm::kGeneral;
  throw ConfigError("unknown algorithm: " + std::string(name));
}

TreeHeightChoice choose_tree_height(std::size_t n, std::uint64_t m) {
  TreeHeightChoice choice;
  choice.alpha = solve_alpha(n, m);  // enforces m >= 10 n ln n
  const double log_n = std::log(static_cast<double>(n));
  const double h_real =
      choice.alpha * height_exponent(choice.alpha) * log_n;
  double h = std::max(1.0, std::round(h_real));
  h = std::min(h, 62.0);
  auto height = static_cast<unsigned>(h);
  // Shrink until the leaf blocks keep at least one slot each.
  while (height > 1 && (m >> height) < 2) --height;
  choice.height = height;
  choice.width = (m >> height) - 1;
  if (choice.width < 1) {
    throw ConfigError("choose_tree_height: no feasible block width");
  }
  return choice;
}

namespace {

unsigned infer_pure_tree_height(Position m) {
  // m = 2^(h+1) - 1 for some h >= 0.
  if (!std::has_single_bit(m + 1)) {
    throw ConfigError(
        "sparse ranker: m must be 2^(h+1) - 1 for an integer height");
  }
  return static_cast<unsigned>(std::bit_width(m + 1)) - 2;
}

}  // namespace

std::unique_ptr<OnlineRanker> make_ranker(Algorithm algorithm, std::size_t n,
                                          Position m,
                                          const RankerOptions& options) {
  switch (algorithm) {
    case Algorithm::kDense:
      if (m != n) throw ConfigError("dense: requires m = n");
      return std::make_unique<DenseRanker>(true);
    case Algorithm::kNoiseless:
      if (m != n) throw ConfigError("noiseless: requires m = n");
      return std::make_unique<DenseRanker>(false);
    case Algorithm::kScaledDense:
      if (m < n) throw ConfigError("scaled-dense: requires m >= n");
      return std::make_unique<DenseRanker>(true);
    case Algorithm::kRandom:
      return std::make_unique<RandomPlacementRanker>();
    case Algorithm::kSparse: {
      const unsigned height =
          options.height ? *options.height : infer_pure_tree_height(m);
      if (height > 62 || m != (Position{1} << (height + 1)) - 1) {
        throw ConfigError("sparse: requires m = 2^(h+1) - 1");
      }
      return TreeRanker::pure(height);
    }
    case Algorithm::kGeneral: {
      unsigned height = 0;
      std::uint64_t width = 0;
      if (options.height && options.width) {
        height = *options.height;
        width = *options.width;
      } else if (!options.height && !options.width) {
        const TreeHeightChoice choice = choose_tree_height(n, m);
        height = choice.height;
        width = choice.width;
      } else {
        throw ConfigError("general: height and width must be given together");
      }
      if (height < 1) throw ConfigError("general: height must be >= 1");
      if (width < 1) throw ConfigError("general: block width must be >= 1");
      return std::make_unique<TreeRanker>(height, width);
    }
  }
  throw ConfigError("make_ranker: unknown algorithm");
}

PlacementMap run_online(OnlineRanker& ranker, const Instance& instance) {
  ComparisonOracle oracle(instance);
  std::vector<Position> positions_by_rank(instance.n, 0);
  for (std::size_t t = 0; t < instance.n; ++t) {
    oracle.begin_step(t);
    const Position pos = ranker.place(t, oracle);
    positions_by_rank[instance.arrivals[t] - 1] = pos;
  }
  return PlacementMap(std::move(positions_by_rank), instance.m);
}

}  // namespace secrank
