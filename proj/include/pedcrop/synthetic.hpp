#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pedcrop/annotations.hpp"

namespace pedcrop {

/// A loose cluster of pedestrians drifting together.
struct PedestrianGroup {
  double center_x = 0.0;
  double center_y = 0.0;
  int count = 1;
  /// Members are placed uniformly within +/- spread of the center.
  double spread_x = 0.0;
  double spread_y = 0.0;
  double min_height = 40.0;
  double max_height = 40.0;
  /// The first `anchors` members get `anchor_height` instead.
  int anchors = 0;
  double anchor_height = 60.0;
  /// Pixels per frame.
  double velocity_x = 0.0;
  double velocity_y = 0.0;
};

struct SceneConfig {
  FrameDims dims{1920, 1080};
  std::size_t frames = 50;
  std::uint64_t seed = 1;
  double width_to_height = 0.4;
  std::vector<PedestrianGroup> groups;
};

/// Deterministic moving-pedestrian annotations. Object ids are assigned
/// consecutively from 1; every object is present in every frame and is
/// clipped to the frame.
AnnotationSet make_scene(const SceneConfig& cfg);

/// Three slow groups of six pedestrians. Most are 20-28 px tall; each group
/// carries one 40 px member that the full-frame pass can see, which is what
/// seeds the crops.
SceneConfig small_pedestrian_scene(std::uint64_t seed, std::size_t frames = 50);

}  // namespace pedcrop
