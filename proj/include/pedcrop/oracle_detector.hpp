#pragma once

#include <cstdint>
#include <span>

#include "pedcrop/annotations.hpp"
#include "pedcrop/detector.hpp"

namespace pedcrop {

/// Knobs of the ground-truth driven detector. Localization noise and misses
/// grow with the downscale from frame to detector input.
struct OracleConfig {
  std::uint64_t rng_seed = 0;
  /// Objects shorter than this in detector-input pixels are missed.
  double min_visible_height = 12.0;
  /// Per-edge jitter amplitude, as a fraction of the box size per unit of
  /// downscale (frame pixels per input pixel).
  double jitter_fraction = 0.05;
  double base_confidence = 0.85;
  double flicker_prob = 0.0;
  double degraded_confidence = 0.05;
  /// Minimum fraction of an object's area inside the region for it to be
  /// seen there.
  double min_region_overlap = 0.5;

  void validate() const;

  friend bool operator==(const OracleConfig&, const OracleConfig&) = default;
};

/// Simulated detections for one region of one frame. Pure: noise comes from a
/// counter-based generator keyed by (seed, frame, object id), so the result
/// does not depend on call order.
DetectionList oracle_detect(std::span<const GroundTruthBox> annotations, const BoundingBox& region,
                            int input_width, int input_height, const OracleConfig& cfg,
                            std::size_t frame_index);

class OracleDetector final : public Detector {
 public:
  OracleDetector(const AnnotationSet& truth, OracleConfig cfg);

  DetectionList detect(const FrameRef& frame, const BoundingBox& region, int input_width,
                       int input_height) override;
  bool concurrent_safe() const override { return true; }

 private:
  const AnnotationSet& truth_;
  OracleConfig cfg_;
};

}  // namespace pedcrop
