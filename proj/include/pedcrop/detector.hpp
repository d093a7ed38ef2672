#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "pedcrop/detection.hpp"
#include "pedcrop/geometry.hpp"

namespace pedcrop {

/// Opaque handle to the frame being processed. Detectors that work from
/// annotations or an external process only need its index.
struct FrameRef {
  std::size_t index = 0;
};

class DetectorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs a detector on `region` of a frame, resized to input_width x
/// input_height. Returned boxes are in that input space, i.e. within
/// [0, input_width] x [0, input_height].
class Detector {
 public:
  virtual ~Detector() = default;

  virtual DetectionList detect(const FrameRef& frame, const BoundingBox& region, int input_width,
                               int input_height) = 0;

  /// True when detect() may be called from several threads at once.
  virtual bool concurrent_safe() const { return false; }
};

}  // namespace pedcrop
