#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pedcrop/geometry.hpp"

namespace pedcrop {

/// Union-find over box indices with union by rank and path halving. Each
/// root also carries the member count and the enclosing rectangle of all
/// member boxes, so a merge can be vetted without walking the trees.
class DisjointSetForest {
 public:
  explicit DisjointSetForest(std::span<const BoundingBox> boxes);

  std::size_t size() const { return parent_.size(); }
  std::size_t tree_count() const { return trees_; }

  std::size_t find(std::size_t x);
  bool same_tree(std::size_t a, std::size_t b) { return find(a) == find(b); }

  std::size_t node_count(std::size_t x) { return count_[find(x)]; }
  const BoundingBox& rect(std::size_t x) { return rect_[find(x)]; }

  /// Enclosing rectangle the tree would have if the trees of a and b merged.
  BoundingBox merged_rect(std::size_t a, std::size_t b);

  /// Merges the trees of a and b; returns the surviving root. No-op when they
  /// already share a tree.
  std::size_t unite(std::size_t a, std::size_t b);

 private:
  std::vector<std::size_t> parent_;
  std::vector<unsigned> rank_;
  std::vector<std::size_t> count_;
  std::vector<BoundingBox> rect_;
  std::size_t trees_;
};

}  // namespace pedcrop
