#pragma once

#include <span>

namespace pedcrop {

/// Axis-aligned rectangle in frame pixel coordinates. Coordinates are
/// continuous; rounding only ever happens at a detector boundary.
struct BoundingBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  double center_x() const { return 0.5 * (x_min + x_max); }
  double center_y() const { return 0.5 * (y_min + y_max); }

  /// Finite coordinates with min <= max on both axes.
  bool valid() const;
  bool contains(const BoundingBox& other) const;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct FrameDims {
  int width = 0;
  int height = 0;

  bool valid() const { return width >= 1 && height >= 1; }
  BoundingBox rect() const { return {0.0, 0.0, double(width), double(height)}; }

  friend bool operator==(const FrameDims&, const FrameDims&) = default;
};

double intersection_area(const BoundingBox& a, const BoundingBox& b);

/// Intersection over union; 0 when the boxes are disjoint or either one has
/// zero area.
double iou(const BoundingBox& a, const BoundingBox& b);

/// Euclidean distance between box centers.
double center_distance(const BoundingBox& a, const BoundingBox& b);

/// Smallest box containing every input box. Throws std::invalid_argument on
/// an empty list.
BoundingBox enclosing_rect(std::span<const BoundingBox> boxes);
BoundingBox enclosing_rect(const BoundingBox& a, const BoundingBox& b);

/// Fraction of `box` area that lies inside `region`. A zero-area box counts
/// as fully inside when the region contains it, otherwise 0.
double covered_fraction(const BoundingBox& box, const BoundingBox& region);

/// Intersection with the frame rectangle; may return a zero-area box.
BoundingBox clip_to(const BoundingBox& box, const BoundingBox& bounds);

/// Affine map between a frame-space region and the detector input it is
/// resized to. Scale is applied independently per axis, so a region whose
/// aspect differs from the input aspect is stretched.
class RegionTransform {
 public:
  /// Throws std::invalid_argument for a zero-area region or a non-positive
  /// input size.
  RegionTransform(const BoundingBox& region, int input_width, int input_height);

  const BoundingBox& region() const { return region_; }
  int input_width() const { return input_width_; }
  int input_height() const { return input_height_; }

  /// Input pixels per frame pixel.
  double scale_x() const { return input_width_ / region_.width(); }
  double scale_y() const { return input_height_ / region_.height(); }

  BoundingBox to_frame(const BoundingBox& input_box) const;
  BoundingBox to_input(const BoundingBox& frame_box) const;

 private:
  BoundingBox region_;
  int input_width_;
  int input_height_;
};

}  // namespace pedcrop
