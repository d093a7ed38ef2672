#include "pedcrop/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pedcrop {

bool BoundingBox::valid() const {
  return std::isfinite(x_min) && std::isfinite(y_min) && std::isfinite(x_max) &&
         std::isfinite(y_max) && x_min <= x_max && y_min <= y_max;
}

bool BoundingBox::contains(const BoundingBox& other) const {
  return x_min <= other.x_min && y_min <= other.y_min && x_max >= other.x_max &&
         y_max >= other.y_max;
}

double intersection_area(const BoundingBox& a, const BoundingBox& b) {
  const double w = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double h = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double area_a = a.area();
  const double area_b = b.area();
  if (area_a <= 0.0 || area_b <= 0.0) return 0.0;
  const double inter = intersection_area(a, b);
  if (inter <= 0.0) return 0.0;
  return inter / (area_a + area_b - inter);
}

double center_distance(const BoundingBox& a, const BoundingBox& b) {
  // Plain sqrt: equal squared distances must give bitwise-equal weights.
  const double dx = a.center_x() - b.center_x();
  const double dy = a.center_y() - b.center_y();
  return std::sqrt(dx * dx + dy * dy);
}

BoundingBox enclosing_rect(const BoundingBox& a, const BoundingBox& b) {
  return {std::min(a.x_min, b.x_min), std::min(a.y_min, b.y_min),
          std::max(a.x_max, b.x_max), std::max(a.y_max, b.y_max)};
}

BoundingBox enclosing_rect(std::span<const BoundingBox> boxes) {
  if (boxes.empty()) throw std::invalid_argument("enclosing_rect: empty box list");
  BoundingBox out = boxes.front();
  for (const auto& b : boxes.subspan(1)) out = enclosing_rect(out, b);
  return out;
}

double covered_fraction(const BoundingBox& box, const BoundingBox& region) {
  const double area = box.area();
  if (area <= 0.0) return region.contains(box) ? 1.0 : 0.0;
  return intersection_area(box, region) / area;
}

BoundingBox clip_to(const BoundingBox& box, const BoundingBox& bounds) {
  BoundingBox out{std::clamp(box.x_min, bounds.x_min, bounds.x_max),
                  std::clamp(box.y_min, bounds.y_min, bounds.y_max),
                  std::clamp(box.x_max, bounds.x_min, bounds.x_max),
                  std::clamp(box.y_max, bounds.y_min, bounds.y_max)};
  return out;
}

RegionTransform::RegionTransform(const BoundingBox& region, int input_width, int input_height)
    : region_(region), input_width_(input_width), input_height_(input_height) {
  if (!region.valid() || region.width() <= 0.0 || region.height() <= 0.0)
    throw std::invalid_argument("RegionTransform: region must have positive area");
  if (input_width <= 0 || input_height <= 0)
    throw std::invalid_argument("RegionTransform: input size must be positive");
}

BoundingBox RegionTransform::to_frame(const BoundingBox& b) const {
  const double sx = region_.width() / input_width_;
  const double sy = region_.height() / input_height_;
  return {region_.x_min + b.x_min * sx, region_.y_min + b.y_min * sy,
          region_.x_min + b.x_max * sx, region_.y_min + b.y_max * sy};
}

BoundingBox RegionTransform::to_input(const BoundingBox& b) const {
  const double sx = scale_x();
  const double sy = scale_y();
  return {(b.x_min - region_.x_min) * sx, (b.y_min - region_.y_min) * sy,
          (b.x_max - region_.x_min) * sx, (b.y_max - region_.y_min) * sy};
}

}  // namespace pedcrop
