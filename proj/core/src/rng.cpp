#include "secrank/rng.hpp"

#include <bit>
#include <stdexcept>

namespace secrank {

namespace {

// SplitMix64 step; also serves as the seed-mixing hash.
std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(SeedSpec seed, RngStream stream) {
  // Hash chain: fold master seed, trial index and stream tag into one word,
  // then expand it into the four xoshiro256** state words.
  std::uint64_t h = 0x8BADF00D5EEDC0DEULL;
  h = splitmix64(h) ^ seed.master_seed;
  h = splitmix64(h) ^ static_cast<std::uint64_t>(seed.trial_index);
  h = splitmix64(h) ^ static_cast<std::uint64_t>(stream);
  for (auto& word : state_) {
    word = splitmix64(h);
  }
  // xoshiro's all-zero state is a fixed point; unreachable from splitmix64
  // output in practice, but keep the generator total.
  if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) {
    state_[0] = 0x9E3779B97F4A7C15ULL;
  }
}

std::uint64_t Rng::next_u64() {
  // xoshiro256** by Blackman and Vigna.
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform_real(double lo, double hi) {
  return lo + uniform01() * (hi - lo);
}

std::uint64_t Rng::uniform_below(std::uint64_t bound) {
  if (bound == 0) {
    throw std::invalid_argument("uniform_below: bound must be positive");
  }
  if (bound == 1) {
    return 0;
  }
  // Masked rejection sampling: draw ceil(log2(bound)) bits until in range.
  const int bits = 64 - std::countl_zero(bound - 1);
  const std::uint64_t mask =
      (bits >= 64) ? ~0ULL : ((std::uint64_t{1} << bits) - 1);
  for (;;) {
    const std::uint64_t v = next_u64() & mask;
    if (v < bound) {
      return v;
    }
  }
}

bool Rng::coin() { return (next_u64() >> 63) != 0; }

Rng derive_rng(SeedSpec seed, RngStream stream) { return Rng(seed, stream); }

}  // namespace secrank
