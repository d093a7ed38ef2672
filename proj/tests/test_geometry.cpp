#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

#include "pedcrop/geometry.hpp"

using namespace pedcrop;

namespace {

// Counts covered cells of a fine grid; exact for boxes on the 0.25 px lattice.
double grid_area(const std::vector<BoundingBox>& all_of, const BoundingBox& bounds) {
  constexpr double step = 0.25;
  double area = 0.0;
  for (double x = bounds.x_min + step / 2; x < bounds.x_max; x += step)
    for (double y = bounds.y_min + step / 2; y < bounds.y_max; y += step) {
      const bool inside = std::all_of(all_of.begin(), all_of.end(), [&](const BoundingBox& b) {
        return x > b.x_min && x < b.x_max && y > b.y_min && y < b.y_max;
      });
      if (inside) area += step * step;
    }
  return area;
}

BoundingBox random_box(std::mt19937_64& rng, double extent = 200.0) {
  std::uniform_real_distribution<double> pos(0.0, extent);
  std::uniform_real_distribution<double> size(0.5, 60.0);
  const double x = pos(rng), y = pos(rng);
  return {x, y, x + size(rng), y + size(rng)};
}

}  // namespace

TEST(Iou, IdenticalBoxesGiveOne) {
  const BoundingBox a{0, 0, 10, 10};
  EXPECT_DOUBLE_EQ(iou(a, a), 1.0);
}

TEST(Iou, DisjointBoxesGiveZero) {
  EXPECT_EQ(iou({0, 0, 1, 1}, {5, 5, 6, 6}), 0.0);
}

TEST(Iou, HalfOverlapIsOneThird) {
  const BoundingBox a{0, 0, 2, 2};
  const BoundingBox b{1, 0, 3, 2};
  const BoundingBox span{0, 0, 3, 2};
  const double inter = grid_area({a, b}, span);
  const double uni = grid_area({a}, span) + grid_area({b}, span) - inter;
  ASSERT_DOUBLE_EQ(inter, 2.0);
  ASSERT_DOUBLE_EQ(uni, 6.0);
  EXPECT_DOUBLE_EQ(iou(a, b), inter / uni);
  EXPECT_DOUBLE_EQ(iou(a, b), 1.0 / 3.0);
}

TEST(Iou, DegenerateBoxGivesZero) {
  EXPECT_EQ(iou({5, 5, 5, 9}, {0, 0, 10, 10}), 0.0);
  EXPECT_EQ(iou({5, 5, 5, 5}, {5, 5, 5, 5}), 0.0);
}

TEST(Iou, TouchingEdgesDoNotOverlap) {
  EXPECT_EQ(iou({0, 0, 1, 1}, {1, 0, 2, 1}), 0.0);
}

TEST(Iou, PropertiesOnRandomBoxes) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const BoundingBox a = random_box(rng);
    const BoundingBox b = random_box(rng);
    const double ab = iou(a, b);
    EXPECT_EQ(ab, iou(b, a));
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);
    EXPECT_NEAR(iou(a, a), 1.0, 1e-15);
  }
}

TEST(Iou, MatchesGridOracleOnLatticeBoxes) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> q(0, 40);
  for (int i = 0; i < 60; ++i) {
    BoundingBox a{q(rng) * 0.25, q(rng) * 0.25, 0, 0};
    a.x_max = a.x_min + 0.25 + q(rng) * 0.25;
    a.y_max = a.y_min + 0.25 + q(rng) * 0.25;
    BoundingBox b{q(rng) * 0.25, q(rng) * 0.25, 0, 0};
    b.x_max = b.x_min + 0.25 + q(rng) * 0.25;
    b.y_max = b.y_min + 0.25 + q(rng) * 0.25;
    const BoundingBox span = enclosing_rect(a, b);
    const double inter = grid_area({a, b}, span);
    const double expected = inter / (grid_area({a}, span) + grid_area({b}, span) - inter);
    EXPECT_NEAR(iou(a, b), expected, 1e-12);
  }
}

TEST(CenterDistance, Examples) {
  const BoundingBox a{0, 0, 2, 2};
  EXPECT_EQ(center_distance(a, a), 0.0);
  // Centers (0,0) and (3,4).
  EXPECT_DOUBLE_EQ(center_distance({-1, -1, 1, 1}, {2, 3, 4, 5}), 5.0);
  // Centers (1,1) and (11,1).
  EXPECT_DOUBLE_EQ(center_distance(a, {10, 0, 12, 2}), 10.0);
}

TEST(CenterDistance, TriangleInequality) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 2000; ++i) {
    const BoundingBox a = random_box(rng), b = random_box(rng), c = random_box(rng);
    EXPECT_LE(center_distance(a, c), center_distance(a, b) + center_distance(b, c) + 1e-9);
    EXPECT_EQ(center_distance(a, b), center_distance(b, a));
  }
}

TEST(EnclosingRect, Examples) {
  const std::vector<BoundingBox> single{{0, 0, 10, 10}};
  EXPECT_EQ(enclosing_rect(single), (BoundingBox{0, 0, 10, 10}));
  const std::vector<BoundingBox> two{{0, 0, 5, 5}, {3, 3, 12, 8}};
  EXPECT_EQ(enclosing_rect(two), (BoundingBox{0, 0, 12, 8}));
  const std::vector<BoundingBox> nested{{2, 2, 4, 4}, {0, 0, 6, 6}};
  EXPECT_EQ(enclosing_rect(nested), (BoundingBox{0, 0, 6, 6}));
}

TEST(EnclosingRect, EmptyListRejected) {
  const std::vector<BoundingBox> none;
  EXPECT_THROW(enclosing_rect(none), std::invalid_argument);
}

TEST(EnclosingRect, OrderIndependentAndIdempotent) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    std::vector<BoundingBox> boxes(1 + rng() % 8);
    for (auto& b : boxes) b = random_box(rng);
    const BoundingBox r = enclosing_rect(boxes);
    for (const auto& b : boxes) EXPECT_TRUE(r.contains(b));
    std::shuffle(boxes.begin(), boxes.end(), rng);
    EXPECT_EQ(enclosing_rect(boxes), r);
    const std::vector<BoundingBox> again{r, r};
    EXPECT_EQ(enclosing_rect(again), r);
  }
}

TEST(RegionTransform, FullFrameIsIdentity) {
  const RegionTransform t({0, 0, 1920, 1080}, 1920, 1080);
  const BoundingBox b{10.5, 20.25, 100, 300};
  EXPECT_EQ(t.to_frame(b), b);
  EXPECT_EQ(t.to_input(b), b);
}

TEST(RegionTransform, TranslationOnly) {
  const RegionTransform t({100, 50, 300, 150}, 200, 100);
  EXPECT_EQ(t.to_frame({10, 10, 20, 20}), (BoundingBox{110, 60, 120, 70}));
}

TEST(RegionTransform, ScaleTwo) {
  const RegionTransform t({0, 0, 448, 256}, 224, 128);
  EXPECT_EQ(t.to_frame({0, 0, 112, 64}), (BoundingBox{0, 0, 224, 128}));
  EXPECT_DOUBLE_EQ(t.scale_x(), 0.5);
}

TEST(RegionTransform, ZeroAreaRegionRejected) {
  EXPECT_THROW(RegionTransform({10, 10, 10, 50}, 224, 128), std::invalid_argument);
  EXPECT_THROW(RegionTransform({0, 0, 10, 10}, 0, 128), std::invalid_argument);
}

TEST(RegionTransform, RoundTripWithinTolerance) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> pos(0.0, 1500.0);
  std::uniform_real_distribution<double> size(1.0, 500.0);
  std::uniform_int_distribution<int> res(16, 640);
  for (int i = 0; i < 1000; ++i) {
    const double x = pos(rng), y = pos(rng);
    const RegionTransform t({x, y, x + size(rng), y + size(rng)}, res(rng), res(rng));
    const BoundingBox frame_box = random_box(rng, 1500.0);
    const BoundingBox back = t.to_frame(t.to_input(frame_box));
    EXPECT_NEAR(back.x_min, frame_box.x_min, 1e-9);
    EXPECT_NEAR(back.y_min, frame_box.y_min, 1e-9);
    EXPECT_NEAR(back.x_max, frame_box.x_max, 1e-9);
    EXPECT_NEAR(back.y_max, frame_box.y_max, 1e-9);
  }
}

TEST(CoveredFraction, PartialAndDegenerate) {
  EXPECT_DOUBLE_EQ(covered_fraction({0, 0, 10, 10}, {5, 0, 20, 10}), 0.5);
  EXPECT_EQ(covered_fraction({3, 3, 3, 3}, {0, 0, 10, 10}), 1.0);
  EXPECT_EQ(covered_fraction({30, 3, 30, 3}, {0, 0, 10, 10}), 0.0);
}
