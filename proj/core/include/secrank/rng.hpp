#ifndef SECRANK_RNG_HPP
#define SECRANK_RNG_HPP

#include <array>
#include <cstdint>

namespace secrank {

/// Selects the per-trial random stream. Each trial owns one stream per role so
/// the arrival permutation and the placement noise stay statistically
/// independent of each other.
enum class RngStream : std::uint64_t {
  kInstance = 0,
  kRanker = 1,
  kAux = 2,
};

/// Identifies one trial's randomness: the derived generator state is a pure
/// function of (master_seed, trial_index, stream).
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint32_t trial_index = 0;
};

/// Deterministic, platform-independent generator (xoshiro256** seeded through
/// a SplitMix64 hash chain over master_seed, trial_index and stream tag).
/// All draws are defined purely in terms of 64-bit integer arithmetic plus an
/// exact power-of-two scaling for reals, so identical seeds give identical
/// streams on every platform.
class Rng {
 public:
  explicit Rng(SeedSpec seed, RngStream stream = RngStream::kInstance);

  std::uint64_t next_u64();

  /// Uniform real in [0, 1), 53-bit resolution.
  double uniform01();

  /// Uniform real in [lo, hi).
  double uniform_real(double lo, double hi);

  /// Uniform integer in [0, bound) via masked rejection sampling; unbiased for
  /// every bound >= 1.
  std::uint64_t uniform_below(std::uint64_t bound);

  /// Fair coin.
  bool coin();

 private:
  std::array<std::uint64_t, 4> state_;
};

/// Derives the trial generator from a seed specification.
Rng derive_rng(SeedSpec seed, RngStream stream = RngStream::kInstance);

}  // namespace secrank

#endif  // SECRANK_RNG_HPP
