#include "secrank/metrics.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

#include "secrank/errors.hpp"

namespace secrank {

PlacementMap::PlacementMap(std::vector<Position> positions_by_rank, Position m)
    : positions_(std::move(positions_by_rank)), m_(m) {
  if (positions_.size() > m_) {
    throw ConfigError("PlacementMap: more elements than positions");
  }
  std::vector<Position> sorted = positions_;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] < 1 || sorted[i] > m_) {
      throw ConfigError("PlacementMap: position out of range");
    }
    if (i > 0 && sorted[i] == sorted[i - 1]) {
      throw ConfigError("PlacementMap: positions not distinct");
    }
  }
}

namespace {

std::uint64_t merge_count(std::vector<Position>& a, std::vector<Position>& buf,
                          std::size_t lo, std::size_t hi) {
  if (hi - lo <= 1) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t inversions =
      merge_count(a, buf, lo, mid) + merge_count(a, buf, mid, hi);
  std::size_t i = lo;
  std::size_t j = mid;
  std::size_t k = lo;
  while (i < mid && j < hi) {
    if (a[j] < a[i]) {
      inversions += mid - i;  // a[i..mid) all exceed a[j]
      buf[k++] = a[j++];
    } else {
      buf[k++] = a[i++];
    }
  }
  while (i < mid) buf[k++] = a[i++];
  while (j < hi) buf[k++] = a[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
            buf.begin() + static_cast<std::ptrdiff_t>(hi),
            a.begin() + static_cast<std::ptrdiff_t>(lo));
  return inversions;
}

}  // namespace

std::uint64_t count_inversions(const PlacementMap& placement) {
  std::vector<Position> a(placement.positions().begin(),
                          placement.positions().end());
  std::vector<Position> buf(a.size());
  return merge_count(a, buf, 0, a.size());
}

std::uint64_t count_inversions_bruteforce(const PlacementMap& placement) {
  const auto positions = placement.positions();
  std::uint64_t inversions = 0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    for (std::size_t j = i + 1; j < positions.size(); ++j) {
      if (positions[i] > positions[j]) ++inversions;
    }
  }
  return inversions;
}

std::uint64_t footrule(const PlacementMap& placement) {
  if (placement.m() != placement.n()) {
    throw std::domain_error("footrule: defined only for m = n");
  }
  std::uint64_t sum = 0;
  for (std::size_t rank = 1; rank <= placement.n(); ++rank) {
    const auto pos = static_cast<std::int64_t>(placement.position_of_rank(rank));
    sum += static_cast<std::uint64_t>(
        std::llabs(static_cast<std::int64_t>(rank) - pos));
  }
  return sum;
}

}  // namespace secrank
