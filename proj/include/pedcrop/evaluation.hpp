#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pedcrop/annotations.hpp"
#include "pedcrop/detection.hpp"

namespace pedcrop {

enum class ApInterpolation { all_point, eleven_point };

struct EvalOptions {
  double iou_threshold = 0.5;
  ApInterpolation interpolation = ApInterpolation::all_point;
  /// An unmatched prediction with at least this fraction of its area inside
  /// an ignore region is dropped instead of counted as a false positive.
  double ignore_coverage = 0.5;
};

struct PrPoint {
  double recall = 0.0;
  double precision = 0.0;
};

struct EvalReport {
  double ap = 0.0;
  double map = 0.0;  // single class, equals ap
  std::vector<PrPoint> pr_curve;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  std::size_t ground_truth = 0;

  double recall() const { return ground_truth ? double(true_positives) / ground_truth : 0.0; }
  double precision() const {
    const std::size_t n = true_positives + false_positives;
    return n ? double(true_positives) / n : 0.0;
  }
};

/// Single-class detection AP at one IoU threshold. Within each frame,
/// predictions are matched in descending confidence to the best unmatched
/// pedestrian box; the precision/recall curve is accumulated over all frames.
///
/// `predictions[f]` holds frame f. Throws std::invalid_argument if there are
/// more prediction frames than annotated frames.
EvalReport evaluate_map(std::span<const DetectionList> predictions, const AnnotationSet& truth,
                        const EvalOptions& options = {});

/// Area under the monotone precision envelope of `curve`.
double average_precision(std::span<const PrPoint> curve, ApInterpolation interpolation);

struct Throughput {
  std::size_t frames = 0;
  double seconds = 0.0;
  double fps = 0.0;
  double mean_pixels_processed = 0.0;
};

/// Throws std::invalid_argument for zero frames or non-positive time.
Throughput measure_fps(std::size_t frames, double seconds, long long total_pixels_processed = 0);

}  // namespace pedcrop
