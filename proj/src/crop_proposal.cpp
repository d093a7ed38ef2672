#include "pedcrop/crop_proposal.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

#include "pedcrop/disjoint_set.hpp"

namespace pedcrop {

namespace {

void check_boxes(std::span<const BoundingBox> boxes) {
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    if (!boxes[i].valid())
      throw std::invalid_argument("propose_crops: box " + std::to_string(i) +
                                  " is non-finite or inverted");
  }
}

bool fits(const BoundingBox& rect, double max_width, double max_height) {
  return rect.width() <= max_width && rect.height() <= max_height;
}

}  // namespace

std::vector<BoxGraphEdge> build_box_graph(std::span<const BoundingBox> boxes) {
  std::vector<BoxGraphEdge> edges;
  const std::size_t n = boxes.size();
  edges.reserve(n > 1 ? n * (n - 1) / 2 : 0);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      edges.push_back({u, v, center_distance(boxes[u], boxes[v])});
  std::sort(edges.begin(), edges.end(), [](const BoxGraphEdge& a, const BoxGraphEdge& b) {
    return std::tie(a.weight, a.u, a.v) < std::tie(b.weight, b.u, b.v);
  });
  return edges;
}

CropForest propose_crops(std::span<const BoundingBox> boxes, std::size_t k, double max_width,
                         double max_height) {
  if (boxes.empty()) throw std::invalid_argument("propose_crops: no boxes");
  if (k == 0) throw std::invalid_argument("propose_crops: k must be at least 1");
  if (!(max_width > 0.0) || !(max_height > 0.0))
    throw std::invalid_argument("propose_crops: crop limits must be positive");
  check_boxes(boxes);

  DisjointSetForest dsf(boxes);
  CropForest forest;

  if (dsf.tree_count() > k) {
    for (const auto& e : build_box_graph(boxes)) {
      if (dsf.tree_count() <= k) break;
      ++forest.edges_examined;
      if (dsf.same_tree(e.u, e.v)) continue;
      if (!fits(dsf.merged_rect(e.u, e.v), max_width, max_height)) continue;
      dsf.unite(e.u, e.v);
      ++forest.merges;
      forest.merged_weight += e.weight;
    }
  }

  // Group members by root; iterating indices in order keeps members sorted
  // and orders trees by their lowest index.
  std::map<std::size_t, std::size_t> tree_of_root;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const std::size_t root = dsf.find(i);
    auto [it, inserted] = tree_of_root.try_emplace(root, forest.trees.size());
    if (inserted) forest.trees.push_back({{}, dsf.rect(root)});
    forest.trees[it->second].members.push_back(i);
  }
  return forest;
}

TreeSelection select_largest_k(const CropForest& forest, std::size_t k) {
  TreeSelection out;
  out.selected.edges_examined = forest.edges_examined;
  out.selected.merges = forest.merges;
  out.selected.merged_weight = forest.merged_weight;

  std::vector<std::size_t> order(forest.trees.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const CropTree& ta = forest.trees[a];
    const CropTree& tb = forest.trees[b];
    if (ta.size() != tb.size()) return ta.size() > tb.size();
    if (ta.rect.area() != tb.rect.area()) return ta.rect.area() < tb.rect.area();
    return ta.members.front() < tb.members.front();
  });

  if (order.size() <= k) {
    out.selected.trees = forest.trees;
    return out;
  }
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    const CropTree& tree = forest.trees[order[rank]];
    if (rank < k) {
      out.selected.trees.push_back(tree);
    } else {
      out.discarded.insert(out.discarded.end(), tree.members.begin(), tree.members.end());
    }
  }
  std::sort(out.discarded.begin(), out.discarded.end());
  return out;
}

std::string to_string(CropTier tier) { return tier == CropTier::large ? "large" : "small"; }

CropTier parse_crop_tier(const std::string& text) {
  if (text == "large") return CropTier::large;
  if (text == "small") return CropTier::small;
  throw std::invalid_argument("unknown crop tier '" + text + "'");
}

void CropTierConfig::validate() const {
  if (k < 1) throw std::invalid_argument("crop tier: k must be at least 1");
  if (!(max_width >= 1.0) || !(max_height >= 1.0))
    throw std::invalid_argument("crop tier: max crop size must be at least 1 px");
  if (target_width < 1 || target_height < 1)
    throw std::invalid_argument("crop tier: target size must be at least 1 px");
  if (!(pad_fraction >= 0.0) || !std::isfinite(pad_fraction))
    throw std::invalid_argument("crop tier: pad_fraction must be non-negative");
  if (!(min_pad_px >= 0.0) || !std::isfinite(min_pad_px))
    throw std::invalid_argument("crop tier: min_pad_px must be non-negative");
}

namespace {

void inflate_axis(double& lo, double& hi) {
  if (hi - lo > 0.0) return;
  const double mid = 0.5 * (lo + hi);
  lo = mid - 0.5;
  hi = mid + 0.5;
}

void grow_axis(double& lo, double& hi, double length) {
  const double extra = 0.5 * (length - (hi - lo));
  if (extra <= 0.0) return;
  lo -= extra;
  hi += extra;
}

void clamp_axis(double& lo, double& hi, double limit) {
  if (hi - lo >= limit) {
    lo = 0.0;
    hi = limit;
  } else if (lo < 0.0) {
    hi -= lo;
    lo = 0.0;
  } else if (hi > limit) {
    lo -= hi - limit;
    hi = limit;
  }
}

}  // namespace

CropRegion expand_crop(const BoundingBox& tree_rect, const CropTierConfig& tier,
                       CropTier tier_kind, const FrameDims& frame) {
  BoundingBox r = tree_rect;
  inflate_axis(r.x_min, r.x_max);
  inflate_axis(r.y_min, r.y_max);
  const bool oversized = !fits(r, tier.max_width, tier.max_height);

  const double pad_x = std::max(tier.pad_fraction * r.width(), tier.min_pad_px);
  const double pad_y = std::max(tier.pad_fraction * r.height(), tier.min_pad_px);
  r = {r.x_min - pad_x, r.y_min - pad_y, r.x_max + pad_x, r.y_max + pad_y};

  if (!oversized) {
    const double aspect = double(tier.target_width) / tier.target_height;
    if (r.width() < r.height() * aspect) {
      grow_axis(r.x_min, r.x_max, r.height() * aspect);
    } else {
      grow_axis(r.y_min, r.y_max, r.width() / aspect);
    }
  }

  clamp_axis(r.x_min, r.x_max, frame.width);
  clamp_axis(r.y_min, r.y_max, frame.height);
  return {r, tier.target_width, tier.target_height, tier_kind, {}};
}

namespace {

std::vector<CropRegion> run_tier(std::span<const BoundingBox> boxes,
                                 std::span<const std::size_t> index_map,
                                 const CropTierConfig& tier, CropTier kind, const FrameDims& frame) {
  std::vector<CropRegion> crops;
  if (boxes.empty()) return crops;
  const CropForest forest = propose_crops(boxes, tier.k, tier.max_width, tier.max_height);
  const TreeSelection selection = select_largest_k(forest, tier.k);
  for (const auto& tree : selection.selected.trees) {
    CropRegion crop = expand_crop(tree.rect, tier, kind, frame);
    for (std::size_t m : tree.members) crop.members.push_back(index_map[m]);
    crops.push_back(std::move(crop));
  }
  return crops;
}

bool covered_by_any(const BoundingBox& box, const std::vector<CropRegion>& crops,
                    double threshold) {
  return std::any_of(crops.begin(), crops.end(), [&](const CropRegion& c) {
    return covered_fraction(box, c.rect) >= threshold;
  });
}

}  // namespace

TwoTierProposal two_tier_proposal(std::span<const BoundingBox> boxes, const CropTierConfig& large,
                                  const CropTierConfig& small, const FrameDims& frame,
                                  double coverage_threshold) {
  large.validate();
  small.validate();
  if (!frame.valid()) throw std::invalid_argument("two_tier_proposal: invalid frame size");

  TwoTierProposal out;
  if (boxes.empty()) return out;

  std::vector<std::size_t> all(boxes.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  out.large_crops = run_tier(boxes, all, large, CropTier::large, frame);

  std::vector<BoundingBox> rest;
  std::vector<std::size_t> rest_index;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    if (!covered_by_any(boxes[i], out.large_crops, coverage_threshold)) {
      rest.push_back(boxes[i]);
      rest_index.push_back(i);
    }
  }
  out.small_crops = run_tier(rest, rest_index, small, CropTier::small, frame);

  for (std::size_t i : rest_index) {
    if (!covered_by_any(boxes[i], out.small_crops, coverage_threshold))
      out.uncovered.push_back(i);
  }
  return out;
}

TwoTierProposal two_tier_proposal(std::span<const Detection> detections,
                                  const CropTierConfig& large, const CropTierConfig& small,
                                  const FrameDims& frame, double coverage_threshold) {
  std::vector<BoundingBox> boxes;
  boxes.reserve(detections.size());
  for (const auto& d : detections) boxes.push_back(d.box);
  return two_tier_proposal(boxes, large, small, frame, coverage_threshold);
}

}  // namespace pedcrop
