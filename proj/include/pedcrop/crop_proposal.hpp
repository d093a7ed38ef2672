#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "pedcrop/detection.hpp"
#include "pedcrop/geometry.hpp"

namespace pedcrop {

/// Edge of the fully-connected box graph, weighted by center distance.
struct BoxGraphEdge {
  std::size_t u = 0;
  std::size_t v = 0;
  double weight = 0.0;
};

/// All n(n-1)/2 edges with u < v, ordered by (weight, u, v).
std::vector<BoxGraphEdge> build_box_graph(std::span<const BoundingBox> boxes);

struct CropTree {
  std::vector<std::size_t> members;  // ascending box indices
  BoundingBox rect;                  // enclosing rectangle of the members

  std::size_t size() const { return members.size(); }
};

struct CropForest {
  std::vector<CropTree> trees;

  /// Instrumentation from propose_crops: edges that passed the tree-count
  /// check, and the summed weight of the edges that caused a merge.
  std::size_t edges_examined = 0;
  std::size_t merges = 0;
  double merged_weight = 0.0;
};

/// Greedy constrained minimum spanning forest (modified Kruskal).
///
/// Edges are visited in ascending (weight, u, v) order. Before every edge the
/// sweep stops once the forest has at most `k` trees. Two trees merge only if
/// their joint enclosing rectangle is at most `max_width` x `max_height`.
/// Singleton trees are kept whatever their size. Trees come back ordered by
/// their lowest member index.
///
/// Throws std::invalid_argument for an empty box list, non-finite or inverted
/// boxes, k == 0, or non-positive limits. Limits may be +infinity.
CropForest propose_crops(std::span<const BoundingBox> boxes, std::size_t k, double max_width,
                         double max_height);

struct TreeSelection {
  CropForest selected;
  std::vector<std::size_t> discarded;  // ascending box indices
};

/// Keeps the k trees with the most nodes. Equal node counts prefer the
/// smaller enclosing area, then the lowest member index. Selected trees are
/// returned in that ranking order.
TreeSelection select_largest_k(const CropForest& forest, std::size_t k);

enum class CropTier { large, small };
std::string to_string(CropTier tier);
CropTier parse_crop_tier(const std::string& text);

struct CropTierConfig {
  std::size_t k = 3;
  double max_width = 448.0;
  double max_height = 256.0;
  int target_width = 224;
  int target_height = 128;
  double pad_fraction = 0.10;
  /// Lower bound on the per-side padding, in frame pixels.
  double min_pad_px = 8.0;

  static CropTierConfig large_default() { return {}; }
  static CropTierConfig small_default() { return {20, 160.0, 96.0, 160, 96, 0.10, 8.0}; }

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;

  friend bool operator==(const CropTierConfig&, const CropTierConfig&) = default;
};

struct CropRegion {
  BoundingBox rect;
  int target_width = 0;
  int target_height = 0;
  CropTier tier = CropTier::large;
  std::vector<std::size_t> members;

  RegionTransform transform() const { return {rect, target_width, target_height}; }
  long long input_pixels() const { return static_cast<long long>(target_width) * target_height; }

  friend bool operator==(const CropRegion&, const CropRegion&) = default;
};

/// Turns a tree rectangle into an extractable crop: pad every side, widen the
/// short axis symmetrically to the tier's target aspect (skipped when the
/// rectangle already exceeds the tier's max size), then move the result
/// inside the frame, shrinking only an axis longer than the frame itself.
/// Zero-extent axes are inflated to 1 px first.
CropRegion expand_crop(const BoundingBox& tree_rect, const CropTierConfig& tier,
                       CropTier tier_kind, const FrameDims& frame);

inline constexpr double kDefaultCoverageThreshold = 0.95;

struct TwoTierProposal {
  std::vector<CropRegion> large_crops;
  std::vector<CropRegion> small_crops;
  std::vector<std::size_t> uncovered;  // ascending input indices

  std::size_t crop_count() const { return large_crops.size() + small_crops.size(); }
};

/// Large-tier pass over all boxes, then a small-tier pass over the boxes no
/// large crop covers. A box is covered when at least `coverage_threshold` of
/// its area lies inside a crop. Crop member indices refer to `boxes`.
TwoTierProposal two_tier_proposal(std::span<const BoundingBox> boxes, const CropTierConfig& large,
                                  const CropTierConfig& small, const FrameDims& frame,
                                  double coverage_threshold = kDefaultCoverageThreshold);

TwoTierProposal two_tier_proposal(std::span<const Detection> detections, const CropTierConfig& large,
                                  const CropTierConfig& small, const FrameDims& frame,
                                  double coverage_threshold = kDefaultCoverageThreshold);

}  // namespace pedcrop
