#include "secrank/order_structures.hpp"

namespace secrank {

FreePositionSet::FreePositionSet(Position m) : count_(m), m_(m) {
  if (m == 0) throw ConfigError("FreePositionSet: m must be >= 1");
  runs_.emplace(Position{1}, m);
}

bool FreePositionSet::contains(Position p) const {
  auto it = runs_.upper_bound(p);
  if (it == runs_.begin()) return false;
  --it;
  return p >= it->first && p <= it->second;
}

std::optional<Position> FreePositionSet::nearest_free_in(Position target,
                                                         Position lo,
                                                         Position hi) const {
  if (lo > hi || runs_.empty()) return std::nullopt;
  target = std::clamp(target, lo, hi);

  std::optional<Position> below;  // greatest free position <= target
  std::optional<Position> above;  // least free position >= target

  auto it = runs_.upper_bound(target);  // first run starting after target
  if (it != runs_.begin()) {
    auto pred = std::prev(it);
    if (pred->second >= target) return target;  // target itself is free
    if (pred->second >= lo) below = pred->second;
  }
  if (it != runs_.end() && it->first <= hi) above = it->first;

  if (below && above) {
    // *below < target < *above, so an exact tie resolves to the smaller.
    return (target - *below) <= (*above - target) ? below : above;
  }
  if (below) return below;
  return above;
}

Position FreePositionSet::nearest_free(Position target) const {
  auto p = nearest_free_in(target, Position{1}, m_);
  if (!p) throw EmptyFreeSetError("FreePositionSet: no free position left");
  return *p;
}

void FreePositionSet::take(Position p) {
  auto it = runs_.upper_bound(p);
  if (it == runs_.begin()) {
    throw PositionNotFreeError("FreePositionSet: position not free");
  }
  --it;
  const Position start = it->first;
  const Position end = it->second;
  if (p < start || p > end) {
    throw PositionNotFreeError("FreePositionSet: position not free");
  }
  runs_.erase(it);
  if (start < p) runs_.emplace(start, p - 1);
  if (p < end) runs_.emplace(p + 1, end);
  --count_;
}

}  // namespace secrank
