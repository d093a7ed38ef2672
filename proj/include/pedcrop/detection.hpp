#pragma once

#include <string>
#include <vector>

#include "pedcrop/geometry.hpp"

namespace pedcrop {

inline constexpr int kPedestrianClass = 0;

/// Where a detection came from: the full-frame pass or a numbered crop.
struct DetectionSource {
  enum class Kind { full_frame, crop };

  Kind kind = Kind::full_frame;
  int crop_id = -1;

  static DetectionSource full_frame() { return {}; }
  static DetectionSource crop(int id) { return {Kind::crop, id}; }

  /// "full_frame" or "crop:<id>".
  std::string to_string() const;
  /// Inverse of to_string(); throws std::invalid_argument.
  static DetectionSource parse(const std::string& text);

  friend bool operator==(const DetectionSource&, const DetectionSource&) = default;
};

struct Detection {
  BoundingBox box;
  double confidence = 0.0;
  DetectionSource source;
  int class_id = kPedestrianClass;
  /// Accepted only because it overlapped a genuine detection of the previous
  /// frame. The raw detector confidence is kept.
  bool resurrected = false;

  friend bool operator==(const Detection&, const Detection&) = default;
};

using DetectionList = std::vector<Detection>;

}  // namespace pedcrop
