#include "pedcrop/disjoint_set.hpp"

#include <numeric>
#include <utility>

namespace pedcrop {

DisjointSetForest::DisjointSetForest(std::span<const BoundingBox> boxes)
    : parent_(boxes.size()),
      rank_(boxes.size(), 0),
      count_(boxes.size(), 1),
      rect_(boxes.begin(), boxes.end()),
      trees_(boxes.size()) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t DisjointSetForest::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

BoundingBox DisjointSetForest::merged_rect(std::size_t a, std::size_t b) {
  return enclosing_rect(rect_[find(a)], rect_[find(b)]);
}

std::size_t DisjointSetForest::unite(std::size_t a, std::size_t b) {
  std::size_t ra = find(a);
  std::size_t rb = find(b);
  if (ra == rb) return ra;
  if (rank_[ra] < rank_[rb]) std::swap(ra, rb);
  if (rank_[ra] == rank_[rb]) ++rank_[ra];
  parent_[rb] = ra;
  count_[ra] += count_[rb];
  rect_[ra] = enclosing_rect(rect_[ra], rect_[rb]);
  --trees_;
  return ra;
}

}  // namespace pedcrop
