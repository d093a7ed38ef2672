#include "pedcrop/oracle_detector.hpp"

#include <algorithm>
#include <stdexcept>

#include "pedcrop/counter_rng.hpp"

namespace pedcrop {

namespace {

enum Stream : std::uint64_t { kJitterXMin, kJitterYMin, kJitterXMax, kJitterYMax, kFlicker };

bool in_unit(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

void OracleConfig::validate() const {
  if (!in_unit(flicker_prob)) throw std::invalid_argument("oracle: flicker_prob must be in [0, 1]");
  if (!in_unit(base_confidence) || !in_unit(degraded_confidence))
    throw std::invalid_argument("oracle: confidences must be in [0, 1]");
  if (!(min_visible_height >= 0.0))
    throw std::invalid_argument("oracle: min_visible_height must be non-negative");
  if (!(jitter_fraction >= 0.0)) throw std::invalid_argument("oracle: jitter_fraction must be >= 0");
  if (!in_unit(min_region_overlap))
    throw std::invalid_argument("oracle: min_region_overlap must be in [0, 1]");
}

DetectionList oracle_detect(std::span<const GroundTruthBox> annotations, const BoundingBox& region,
                            int input_width, int input_height, const OracleConfig& cfg,
                            std::size_t frame_index) {
  const RegionTransform transform(region, input_width, input_height);
  const double down_x = 1.0 / transform.scale_x();
  const double down_y = 1.0 / transform.scale_y();
  const BoundingBox input_bounds{0.0, 0.0, double(input_width), double(input_height)};

  DetectionList out;
  for (const GroundTruthBox& gt : annotations) {
    if (gt.role != EvalRole::pedestrian || gt.box.area() <= 0.0) continue;
    if (covered_fraction(gt.box, region) < cfg.min_region_overlap) continue;
    if (gt.box.height() * transform.scale_y() < cfg.min_visible_height) continue;

    const auto draw = [&](Stream s) {
      return uniform01({cfg.rng_seed, frame_index, std::uint64_t(std::int64_t(gt.object_id)), s});
    };
    const auto offset = [&](Stream s, double extent, double down) {
      if (cfg.jitter_fraction == 0.0) return 0.0;
      return (2.0 * draw(s) - 1.0) * cfg.jitter_fraction * down * extent;
    };

    const double w = gt.box.width();
    const double h = gt.box.height();
    BoundingBox noisy{gt.box.x_min + offset(kJitterXMin, w, down_x),
                      gt.box.y_min + offset(kJitterYMin, h, down_y),
                      gt.box.x_max + offset(kJitterXMax, w, down_x),
                      gt.box.y_max + offset(kJitterYMax, h, down_y)};
    if (noisy.x_min > noisy.x_max) std::swap(noisy.x_min, noisy.x_max);
    if (noisy.y_min > noisy.y_max) std::swap(noisy.y_min, noisy.y_max);

    const BoundingBox seen = clip_to(transform.to_input(clip_to(noisy, region)), input_bounds);
    if (seen.area() <= 0.0) continue;

    Detection det;
    det.box = seen;
    det.confidence = cfg.base_confidence;
    if (cfg.flicker_prob > 0.0 && draw(kFlicker) < cfg.flicker_prob)
      det.confidence = cfg.degraded_confidence;
    out.push_back(det);
  }
  return out;
}

OracleDetector::OracleDetector(const AnnotationSet& truth, OracleConfig cfg)
    : truth_(truth), cfg_(cfg) {
  cfg_.validate();
}

DetectionList OracleDetector::detect(const FrameRef& frame, const BoundingBox& region,
                                     int input_width, int input_height) {
  if (frame.index >= truth_.frame_count()) return {};
  return oracle_detect(truth_.frames[frame.index], region, input_width, input_height, cfg_,
                       frame.index);
}

}  // namespace pedcrop
