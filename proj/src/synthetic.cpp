#include "pedcrop/synthetic.hpp"

#include "pedcrop/counter_rng.hpp"

namespace pedcrop {

namespace {

enum Stream : std::uint64_t { kOffsetX, kOffsetY, kHeight, kDriftX, kDriftY };

}  // namespace

AnnotationSet make_scene(const SceneConfig& cfg) {
  struct Walker {
    int id;
    double cx0, cy0;
    double height;
    double vx, vy;
  };

  std::vector<Walker> walkers;
  int next_id = 1;
  for (std::size_t g = 0; g < cfg.groups.size(); ++g) {
    const PedestrianGroup& group = cfg.groups[g];
    for (int m = 0; m < group.count; ++m) {
      const int id = next_id++;
      const auto draw = [&](Stream s) { return uniform01({cfg.seed, std::uint64_t(id), s}); };
      Walker w;
      w.id = id;
      w.cx0 = group.center_x + (2.0 * draw(kOffsetX) - 1.0) * group.spread_x;
      w.cy0 = group.center_y + (2.0 * draw(kOffsetY) - 1.0) * group.spread_y;
      w.height = m < group.anchors
                     ? group.anchor_height
                     : group.min_height + draw(kHeight) * (group.max_height - group.min_height);
      // Small individual drift on top of the group motion.
      w.vx = group.velocity_x + (2.0 * draw(kDriftX) - 1.0) * 0.1;
      w.vy = group.velocity_y + (2.0 * draw(kDriftY) - 1.0) * 0.1;
      walkers.push_back(w);
    }
  }

  AnnotationSet set;
  set.dims = cfg.dims;
  set.frames.resize(cfg.frames);
  const BoundingBox bounds = cfg.dims.rect();
  for (std::size_t f = 0; f < cfg.frames; ++f) {
    for (const Walker& w : walkers) {
      const double cx = w.cx0 + w.vx * double(f);
      const double cy = w.cy0 + w.vy * double(f);
      const double half_w = 0.5 * w.height * cfg.width_to_height;
      const double half_h = 0.5 * w.height;
      GroundTruthBox gt;
      gt.object_id = w.id;
      gt.box = clip_to({cx - half_w, cy - half_h, cx + half_w, cy + half_h}, bounds);
      set.frames[f].push_back(gt);
    }
  }
  return set;
}

SceneConfig small_pedestrian_scene(std::uint64_t seed, std::size_t frames) {
  SceneConfig cfg;
  cfg.seed = seed;
  cfg.frames = frames;
  PedestrianGroup group;
  group.count = 6;
  group.spread_x = 45.0;
  group.spread_y = 25.0;
  group.min_height = 20.0;
  group.max_height = 28.0;
  group.anchors = 1;
  group.anchor_height = 40.0;

  group.center_x = 400.0;
  group.center_y = 300.0;
  group.velocity_x = 0.5;
  cfg.groups.push_back(group);

  group.center_x = 1000.0;
  group.center_y = 600.0;
  group.velocity_x = -0.3;
  group.velocity_y = 0.2;
  cfg.groups.push_back(group);

  group.center_x = 1500.0;
  group.center_y = 850.0;
  group.velocity_x = 0.0;
  group.velocity_y = -0.4;
  cfg.groups.push_back(group);

  return cfg;
}

}  // namespace pedcrop
