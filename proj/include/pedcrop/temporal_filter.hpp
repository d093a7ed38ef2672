#pragma once

#include <span>

#include "pedcrop/detection.hpp"

namespace pedcrop {

struct TemporalConfig {
  double conf_genuine = 0.2;
  double conf_floor = 0.001;
  double overlap_min = 0.5;

  /// Throws std::invalid_argument unless 0 <= floor <= genuine <= 1 and
  /// 0 < overlap_min <= 1.
  void validate() const;

  friend bool operator==(const TemporalConfig&, const TemporalConfig&) = default;
};

struct FilterResult {
  DetectionList accepted;
  DetectionList genuine_next;
};

/// Per-candidate rule, input order preserved:
///   confidence <  floor            -> dropped
///   confidence >= genuine          -> accepted and genuine
///   otherwise                      -> accepted (flagged resurrected) iff its
///                                     best IoU against `genuine_prev` reaches
///                                     overlap_min; never genuine
FilterResult filter_detections(std::span<const Detection> candidates,
                               std::span<const Detection> genuine_prev,
                               const TemporalConfig& cfg);

}  // namespace pedcrop
