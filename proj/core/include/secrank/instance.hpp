#ifndef SECRANK_INSTANCE_HPP
#define SECRANK_INSTANCE_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "secrank/rng.hpp"

namespace secrank {

/// 1-based slot index in [1..m].
using Position = std::uint64_t;

/// How the arrival order of true ranks is drawn.
enum class ArrivalMode {
  /// Uniformly random permutation of {1..n}.
  kUniformRandom,
  /// Each step reveals, with probability 1/2 each, the smallest or the
  /// largest true rank not yet seen, so every prefix consists of extremes
  /// only. Forces quadratic cost on any online placement rule.
  kAdversarialMinMax,
};

const char* to_string(ArrivalMode mode);
ArrivalMode arrival_mode_from_string(std::string_view name);

/// One ranking problem: n distinct elements arriving into m >= n slots.
/// arrivals[t] is the true rank (in [1..n]) of the element arriving at step
/// t; the vector is always a permutation of {1..n}.
struct Instance {
  std::size_t n = 0;
  Position m = 0;
  std::vector<std::uint32_t> arrivals;

  /// Throws ConfigError unless n >= 1, m >= n and arrivals is a permutation
  /// of {1..n}.
  void validate() const;
};

/// Draws an instance deterministically from the seed. Throws ConfigError for
/// n = 0 or m < n.
Instance generate_instance(std::size_t n, Position m, ArrivalMode mode,
                           SeedSpec seed);

/// Unbiased swap shuffle of {1..n} using masked-rejection index draws.
std::vector<std::uint32_t> random_permutation(std::size_t n, Rng& rng);

/// JSON object {"n":..., "m":..., "arrivals":[...]}.
std::string to_json(const Instance& instance);
Instance instance_from_json(std::string_view text);

}  // namespace secrank

#endif  // SECRANK_INSTANCE_HPP
