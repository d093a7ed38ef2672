#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

#include "pedcrop/temporal_filter.hpp"

using namespace pedcrop;

namespace {

Detection det(BoundingBox b, double conf) {
  Detection d;
  d.box = b;
  d.confidence = conf;
  return d;
}

const BoundingBox kBox{100, 100, 140, 200};
// IoU with kBox: 40*90 / (40*100) = 0.9.
const BoundingBox kNear{100, 110, 140, 200};

bool same(const DetectionList& a, const DetectionList& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a[i].box == b[i].box) || a[i].confidence != b[i].confidence) return false;
  return true;
}

DetectionList random_list(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> pos(0, 300), size(10, 80), conf(0, 1);
  std::uniform_int_distribution<int> tier(0, 3);
  DetectionList out;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = pos(rng), y = pos(rng);
    double c = conf(rng);
    // Bias toward the weak band and the exact thresholds.
    switch (tier(rng)) {
      case 0: c *= 0.2; break;
      case 1: c = (rng() % 2) ? 0.2 : 0.001; break;
      default: break;
    }
    out.push_back(det({x, y, x + size(rng), y + size(rng)}, c));
  }
  return out;
}

}  // namespace

TEST(TemporalFilter, ConfidentDetectionIsGenuine) {
  const DetectionList cand{det(kBox, 0.25)};
  const auto r = filter_detections(cand, {}, {});
  ASSERT_EQ(r.accepted.size(), 1u);
  ASSERT_EQ(r.genuine_next.size(), 1u);
  EXPECT_FALSE(r.accepted[0].resurrected);
}

TEST(TemporalFilter, BelowFloorDroppedEvenWithOverlap) {
  const DetectionList cand{det(kBox, 0.0005)};
  const DetectionList prev{det(kBox, 0.9)};
  const auto r = filter_detections(cand, prev, {});
  EXPECT_TRUE(r.accepted.empty());
  EXPECT_TRUE(r.genuine_next.empty());
}

TEST(TemporalFilter, LowConfidenceResurrectedByOverlap) {
  const DetectionList cand{det(kNear, 0.05)};
  const DetectionList prev{det(kBox, 0.9)};
  const auto r = filter_detections(cand, prev, {});
  ASSERT_EQ(r.accepted.size(), 1u);
  EXPECT_TRUE(r.accepted[0].resurrected);
  EXPECT_EQ(r.accepted[0].confidence, 0.05);
  EXPECT_TRUE(r.genuine_next.empty());
}

TEST(TemporalFilter, LowConfidenceWithoutOverlapDropped) {
  const DetectionList cand{det({500, 500, 540, 600}, 0.05)};
  const DetectionList prev{det(kBox, 0.9)};
  EXPECT_TRUE(filter_detections(cand, prev, {}).accepted.empty());
}

TEST(TemporalFilter, BoundariesAreInclusive) {
  const DetectionList prev{det(kBox, 0.9)};
  EXPECT_EQ(filter_detections(DetectionList{det(kNear, 0.001)}, prev, {}).accepted.size(), 1u);
  const auto r = filter_detections(DetectionList{det({600, 600, 640, 700}, 0.2)}, {}, {});
  EXPECT_EQ(r.genuine_next.size(), 1u);
  // 40x50 inside 40x100: IoU exactly 0.5.
  const DetectionList half{det({100, 100, 140, 150}, 0.1)};
  EXPECT_EQ(filter_detections(half, prev, {}).accepted.size(), 1u);
}

TEST(TemporalFilter, PreservesInputOrder) {
  const DetectionList cand{det({0, 0, 10, 10}, 0.9), det(kNear, 0.05), det({50, 0, 60, 10}, 0.5)};
  const DetectionList prev{det(kBox, 0.9)};
  const auto r = filter_detections(cand, prev, {});
  ASSERT_EQ(r.accepted.size(), 3u);
  EXPECT_EQ(r.accepted[1].box, kNear);
  ASSERT_EQ(r.genuine_next.size(), 2u);
  EXPECT_EQ(r.genuine_next[1].box, cand[2].box);
}

TEST(TemporalFilter, ConfigValidation) {
  EXPECT_NO_THROW(TemporalConfig{}.validate());
  EXPECT_THROW((TemporalConfig{0.1, 0.2, 0.5}.validate()), std::invalid_argument);
  EXPECT_THROW((TemporalConfig{0.2, 0.001, 0.0}.validate()), std::invalid_argument);
  EXPECT_THROW((TemporalConfig{1.5, 0.001, 0.5}.validate()), std::invalid_argument);
}

TEST(TemporalFilterProperty, AcceptedIsSubsetAndGenuineIsConfident) {
  std::mt19937_64 rng(11);
  const TemporalConfig cfg;
  for (int i = 0; i < 500; ++i) {
    const auto cand = random_list(rng, rng() % 15);
    const auto prev = random_list(rng, rng() % 10);
    const auto r = filter_detections(cand, prev, cfg);
    std::size_t j = 0;
    for (const auto& a : r.accepted) {
      while (j < cand.size() && !(cand[j].box == a.box && cand[j].confidence == a.confidence)) ++j;
      ASSERT_LT(j, cand.size());
      ++j;
      EXPECT_GE(a.confidence, cfg.conf_floor);
    }
    for (const auto& g : r.genuine_next) EXPECT_GE(g.confidence, cfg.conf_genuine);
    for (const auto& c : cand) {
      if (c.confidence < cfg.conf_genuine) continue;
      EXPECT_TRUE(std::any_of(r.genuine_next.begin(), r.genuine_next.end(),
                              [&](const Detection& g) { return g.box == c.box; }));
    }
  }
}

TEST(TemporalFilterProperty, MonotoneInPreviousGenuineSet) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 500; ++i) {
    const auto cand = random_list(rng, rng() % 15);
    auto prev = random_list(rng, rng() % 8);
    const auto before = filter_detections(cand, prev, {});
    const auto extra = random_list(rng, 1 + rng() % 4);
    prev.insert(prev.end(), extra.begin(), extra.end());
    const auto after = filter_detections(cand, prev, {});
    EXPECT_GE(after.accepted.size(), before.accepted.size());
    EXPECT_TRUE(same(before.genuine_next, after.genuine_next));
    for (const auto& a : before.accepted)
      EXPECT_TRUE(std::any_of(after.accepted.begin(), after.accepted.end(),
                              [&](const Detection& d) { return d.box == a.box; }));
  }
}

TEST(TemporalFilterProperty, ResurrectionDoesNotChain) {
  // Genuine on frame 1, weak on frames 2 and 3: frame 2 is carried, frame 3
  // has no genuine anchor left.
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> pos(0, 500), weak(0.001, 0.1999);
  for (int i = 0; i < 200; ++i) {
    const double x = pos(rng), y = pos(rng);
    const BoundingBox b{x, y, x + 30, y + 70};
    const auto f1 = filter_detections(DetectionList{det(b, 0.8)}, {}, {});
    const auto f2 = filter_detections(DetectionList{det(b, weak(rng))}, f1.genuine_next, {});
    ASSERT_EQ(f2.accepted.size(), 1u);
    EXPECT_TRUE(f2.genuine_next.empty());
    const auto f3 = filter_detections(DetectionList{det(b, weak(rng))}, f2.genuine_next, {});
    EXPECT_TRUE(f3.accepted.empty());
  }
}
