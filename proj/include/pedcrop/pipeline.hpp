#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "pedcrop/crop_proposal.hpp"
#include "pedcrop/detection.hpp"
#include "pedcrop/detector.hpp"
#include "pedcrop/temporal_filter.hpp"

namespace pedcrop {

struct PipelineConfig {
  int full_frame_period = 5;
  int full_frame_width = 416;
  int full_frame_height = 416;
  CropTierConfig large_tier = CropTierConfig::large_default();
  CropTierConfig small_tier = CropTierConfig::small_default();
  TemporalConfig temporal;
  double nms_iou = 0.45;
  double coverage_threshold = kDefaultCoverageThreshold;

  /// Run the active crops on refresh frames too, merged with the full frame.
  bool crops_on_refresh = true;
  /// Baseline: full-frame detection on every frame and no crops at all.
  bool full_frame_only = false;
  /// When off, candidates are thresholded at conf_genuine with no
  /// carry-over from the previous frame.
  bool temporal_filtering = true;
  /// Dispatch detector calls of one frame on worker threads when the
  /// detector declares itself concurrent-safe.
  bool parallel_dispatch = false;

  void validate() const;

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

struct FrameState {
  std::size_t frame_index = 0;
  DetectionList genuine_prev;
  std::vector<CropRegion> active_crops;
};

struct FrameTiming {
  double full_frame_s = 0.0;
  std::vector<double> per_crop_s;
  double proposal_s = 0.0;
  double filter_s = 0.0;
  double total_s = 0.0;
};

struct FrameResult {
  std::size_t frame_index = 0;
  bool refresh = false;
  DetectionList detections;  // frame coordinates
  std::vector<CropRegion> crops_used;
  std::size_t full_frame_calls = 0;
  std::size_t crop_calls = 0;
  long long pixels_processed = 0;
  FrameTiming timing;
};

struct FrameOutcome {
  FrameResult result;
  FrameState state;
};

/// A detector call failed; no partial results are kept for the frame.
class FrameError : public std::runtime_error {
 public:
  FrameError(std::size_t frame, const BoundingBox& region, const std::string& cause);

  std::size_t frame() const { return frame_; }
  const BoundingBox& region() const { return region_; }

 private:
  std::size_t frame_;
  BoundingBox region_;
};

/// Greedy NMS over the concatenation of `lists`: candidates in descending
/// confidence (earlier position wins ties); a candidate is dropped when its
/// IoU with an already kept box exceeds `nms_iou`.
DetectionList merge_detections(std::span<const DetectionList> lists, double nms_iou);

bool is_refresh_frame(std::size_t frame_index, const PipelineConfig& cfg);

/// One step of the detection loop.
///
/// Refresh frames (every full_frame_period-th, starting at 0) run the
/// full-frame detector first, then the active crops; other frames run only
/// the crops. Results are remapped to frame coordinates, merged with NMS,
/// temporally filtered, and the accepted detections seed the crops for the
/// next frame.
FrameOutcome process_frame(const FrameRef& frame, const FrameDims& dims, const FrameState& state,
                           Detector& detector, const PipelineConfig& cfg);

struct ReplayResult {
  std::vector<FrameResult> frames;
  double wall_seconds = 0.0;

  long long total_pixels() const;
  std::vector<DetectionList> predictions() const;
};

/// Runs frames [0, frame_count) through process_frame from an empty state.
ReplayResult replay(std::size_t frame_count, const FrameDims& dims, Detector& detector,
                    const PipelineConfig& cfg);

}  // namespace pedcrop
