#include "secrank/instance.hpp"

#include <algorithm>
#include <utility>

#include "json.hpp"
#include "secrank/errors.hpp"

namespace secrank {

const char* to_string(ArrivalMode mode) {
  switch (mode) {
    case ArrivalMode::kUniformRandom:
      return "uniform";
    case ArrivalMode::kAdversarialMinMax:
      return "adversarial";
  }
  return "unknown";
}

ArrivalMode arrival_mode_from_string(std::string_view name) {
  if (name == "uniform") return ArrivalMode::kUniformRandom;
  if (name == "adversarial") return ArrivalMode::kAdversarialMinMax;
  throw ConfigError("unknown arrival mode: " + std::string(name));
}

void Instance::validate() const {
  if (n == 0) throw ConfigError("instance: n must be >= 1");
  if (m < n) throw ConfigError("instance: m must be >= n");
  if (arrivals.size() != n) {
    throw ConfigError("instance: arrivals length != n");
  }
  std::vector<bool> seen(n, false);
  for (std::uint32_t rank : arrivals) {
    if (rank < 1 || rank > n || seen[rank - 1]) {
      throw ConfigError("instance: arrivals is not a permutation of 1..n");
    }
    seen[rank - 1] = true;
  }
}

std::vector<std::uint32_t> random_permutation(std::size_t n, Rng& rng) {
  std::vector<std::uint32_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) {
    perm[i] = static_cast<std::uint32_t>(i + 1);
  }
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.uniform_below(i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

Instance generate_instance(std::size_t n, Position m, ArrivalMode mode,
                           SeedSpec seed) {
  if (n == 0) throw ConfigError("generate_instance: n must be >= 1");
  if (m < n) throw ConfigError("generate_instance: m must be >= n");

  Rng rng = derive_rng(seed, RngStream::kInstance);
  Instance instance;
  instance.n = n;
  instance.m = m;

  if (mode == ArrivalMode::kUniformRandom) {
    instance.arrivals = random_permutation(n, rng);
  } else {
    instance.arrivals.reserve(n);
    std::uint32_t lo = 1;
    std::uint32_t hi = static_cast<std::uint32_t>(n);
    while (lo < hi) {
      if (rng.coin()) {
        instance.arrivals.push_back(lo++);
      } else {
        instance.arrivals.push_back(hi--);
      }
    }
    instance.arrivals.push_back(lo);
  }
  return instance;
}

std::string to_json(const Instance& instance) {
  nlohmann::json j;
  j["n"] = instance.n;
  j["m"] = instance.m;
  j["arrivals"] = instance.arrivals;
  return j.dump();
}

Instance instance_from_json(std::string_view text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Instance instance;
  instance.n = j.at("n").get<std::size_t>();
  instance.m = j.at("m").get<Position>();
  instance.arrivals = j.at("arrivals").get<std::vector<std::uint32_t>>();
  instance.validate();
  return instance;
}

}  // namespace secrank
