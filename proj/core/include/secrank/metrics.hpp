#ifndef SECRANK_METRICS_HPP
#define SECRANK_METRICS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "secrank/instance.hpp"

namespace secrank {

/// A completed assignment: position_of_rank(r) is the slot (in [1..m]) given
/// to the element whose true rank is r. Total on all n elements and injective
/// into [1..m]; both are checked at construction.
class PlacementMap {
 public:
  PlacementMap(std::vector<Position> positions_by_rank, Position m);

  std::size_t n() const { return positions_.size(); }
  Position m() const { return m_; }

  /// rank is 1-based.
  Position position_of_rank(std::size_t rank) const {
    return positions_[rank - 1];
  }

  /// Positions listed in true-rank order.
  std::span<const Position> positions() const { return positions_; }

 private:
  std::vector<Position> positions_;
  Position m_;
};

/// Number of element pairs whose position order contradicts their true-rank
/// order (Kendall tau distance to the sorted order). O(n log n) merge count.
std::uint64_t count_inversions(const PlacementMap& placement);

/// Literal O(n^2) pair scan; the oracle for count_inversions.
std::uint64_t count_inversions_bruteforce(const PlacementMap& placement);

/// Sum over elements of |true rank - assigned position| (Spearman footrule).
/// Only defined for m = n; throws std::domain_error otherwise.
std::uint64_t footrule(const PlacementMap& placement);

}  // namespace secrank

#endif  // SECRANK_METRICS_HPP
