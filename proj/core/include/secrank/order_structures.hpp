#ifndef SECRANK_ORDER_STRUCTURES_HPP
#define SECRANK_ORDER_STRUCTURES_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>

#include "secrank/errors.hpp"
#include "secrank/instance.hpp"

namespace secrank {

/// Size-augmented AVL tree over distinct keys. rank_below(key) counts stored
/// keys strictly less than key in O(log size). Comparators are passed per
/// call so a key can be ordered by an external oracle (one comparison side is
/// always the probe key).
template <typename T>
class RelativeRankIndex {
 public:
  std::size_t size() const { return node_count(root_.get()); }
  bool empty() const { return root_ == nullptr; }

  template <typename Less>
  std::size_t rank_below(const T& key, Less less) const {
    std::size_t rank = 0;
    const Node* cur = root_.get();
    while (cur != nullptr) {
      if (less(key, cur->key)) {
        cur = cur->left.get();
      } else if (less(cur->key, key)) {
        rank += node_count(cur->left.get()) + 1;
        cur = cur->right.get();
      } else {
        rank += node_count(cur->left.get());
        break;
      }
    }
    return rank;
  }

  std::size_t rank_below(const T& key) const {
    return rank_below(key, std::less<T>{});
  }

  template <typename Less>
  void insert(const T& key, Less less) {
    root_ = insert_node(std::move(root_), key, less);
  }

  void insert(const T& key) { insert(key, std::less<T>{}); }

 private:
  struct Node {
    explicit Node(const T& k) : key(k) {}
    T key;
    std::unique_ptr<Node> left;
    std::unique_ptr<Node> right;
    std::size_t count = 1;  // subtree size
    int height = 1;
  };
  using NodePtr = std::unique_ptr<Node>;

  static std::size_t node_count(const Node* node) {
    return node ? node->count : 0;
  }
  static int node_height(const Node* node) { return node ? node->height : 0; }

  static void update(Node* node) {
    node->count = 1 + node_count(node->left.get()) + node_count(node->right.get());
    node->height =
        1 + std::max(node_height(node->left.get()), node_height(node->right.get()));
  }

  static int balance(const Node* node) {
    return node_height(node->left.get()) - node_height(node->right.get());
  }

  static NodePtr rotate_right(NodePtr node) {
    NodePtr pivot = std::move(node->left);
    node->left = std::move(pivot->right);
    update(node.get());
    pivot->right = std::move(node);
    update(pivot.get());
    return pivot;
  }

  static NodePtr rotate_left(NodePtr node) {
    NodePtr pivot = std::move(node->right);
    node->right = std::move(pivot->left);
    update(node.get());
    pivot->left = std::move(node);
    update(pivot.get());
    return pivot;
  }

  static NodePtr rebalance(NodePtr node) {
    update(node.get());
    const int bal = balance(node.get());
    if (bal > 1) {
      if (balance(node->left.get()) < 0) {
        node->left = rotate_left(std::move(node->left));
      }
      return rotate_right(std::move(node));
    }
    if (bal < -1) {
      if (balance(node->right.get()) > 0) {
        node->right = rotate_right(std::move(node->right));
      }
      return rotate_left(std::move(node));
    }
    return node;
  }

  template <typename Less>
  static NodePtr insert_node(NodePtr node, const T& key, Less& less) {
    if (node == nullptr) {
      return std::make_unique<Node>(key);
    }
    if (less(key, node->key)) {
      node->left = insert_node(std::move(node->left), key, less);
    } else if (less(node->key, key)) {
      node->right = insert_node(std::move(node->right), key, less);
    } else {
      throw DuplicateKeyError("RelativeRankIndex: duplicate key");
    }
    return rebalance(std::move(node));
  }

  NodePtr root_;
};

/// The shrinking subset of {1..m} not yet assigned, stored as maximal runs of
/// consecutive free positions (so m can be huge while memory stays
/// proportional to the number of placements). All queries are O(log #runs).
class FreePositionSet {
 public:
  /// Starts as the full range {1..m}, m >= 1.
  explicit FreePositionSet(Position m);

  std::uint64_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  Position universe() const { return m_; }

  bool contains(Position p) const;

  /// Free position minimizing |p - target|, ties broken toward the smaller
  /// position. Throws EmptyFreeSetError when no position is free.
  Position nearest_free(Position target) const;

  /// Same, restricted to positions in [lo, hi]; empty optional when the range
  /// holds no free position. target is clamped into [lo, hi].
  std::optional<Position> nearest_free_in(Position target, Position lo,
                                          Position hi) const;

  /// Removes p. Throws PositionNotFreeError if p is not currently free.
  void take(Position p);

 private:
  std::map<Position, Position> runs_;  // start -> inclusive end
  std::uint64_t count_ = 0;
  Position m_ = 0;
};

}  // namespace secrank

#endif  // SECRANK_ORDER_STRUCTURES_HPP
