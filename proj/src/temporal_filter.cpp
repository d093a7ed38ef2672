#include "pedcrop/temporal_filter.hpp"

#include <algorithm>
#include <stdexcept>

namespace pedcrop {

void TemporalConfig::validate() const {
  if (!(0.0 <= conf_floor && conf_floor <= conf_genuine && conf_genuine <= 1.0))
    throw std::invalid_argument("temporal: require 0 <= conf_floor <= conf_genuine <= 1");
  if (!(overlap_min > 0.0 && overlap_min <= 1.0))
    throw std::invalid_argument("temporal: overlap_min must be in (0, 1]");
}

FilterResult filter_detections(std::span<const Detection> candidates,
                               std::span<const Detection> genuine_prev,
                               const TemporalConfig& cfg) {
  FilterResult out;
  for (const Detection& c : candidates) {
    if (c.confidence < cfg.conf_floor) continue;
    if (c.confidence >= cfg.conf_genuine) {
      Detection d = c;
      d.resurrected = false;
      out.accepted.push_back(d);
      out.genuine_next.push_back(d);
      continue;
    }
    double best = 0.0;
    for (const Detection& g : genuine_prev) best = std::max(best, iou(c.box, g.box));
    if (best >= cfg.overlap_min) {
      Detection d = c;
      d.resurrected = true;
      out.accepted.push_back(d);
    }
  }
  return out;
}

}  // namespace pedcrop
