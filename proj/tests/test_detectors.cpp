#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "pedcrop/external_detector.hpp"
#include "pedcrop/oracle_detector.hpp"

using namespace pedcrop;

namespace {

const std::string kFixtures = PEDCROP_FIXTURES;
const BoundingBox kFrame{0, 0, 1920, 1080};

GroundTruthBox walker(int id, BoundingBox b) {
  GroundTruthBox g;
  g.object_id = id;
  g.box = b;
  return g;
}

OracleConfig quiet() {
  OracleConfig c;
  c.jitter_fraction = 0.0;
  return c;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

DetectionList replay(const std::string& name) {
  std::istringstream in(slurp(kFixtures + "/protocol/" + name));
  std::ostringstream out;
  StreamChannel ch(in, out);
  return read_boxes_response(ch);
}

}  // namespace

TEST(OracleDetector, FortyPixelWalkerSeenInLargeCrop) {
  // 448x256 into 224x128 halves everything: 40 px tall becomes 20.
  const std::vector<GroundTruthBox> gt{walker(1, {200, 100, 216, 140})};
  const auto d = oracle_detect(gt, {100, 50, 548, 306}, 224, 128, quiet(), 0);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].box, (BoundingBox{50, 25, 58, 45}));
  EXPECT_EQ(d[0].confidence, 0.85);
}

TEST(OracleDetector, TwentyFivePixelWalkerOnlyInCrop) {
  const std::vector<GroundTruthBox> gt{walker(1, {200, 100, 210, 125})};
  // 25 * 416 / 1080 = 9.6 input px.
  EXPECT_TRUE(oracle_detect(gt, kFrame, 416, 416, quiet(), 0).empty());
  EXPECT_EQ(oracle_detect(gt, {150, 60, 310, 156}, 160, 96, quiet(), 0).size(), 1u);
}

TEST(OracleDetector, RegionOverlapRule) {
  const std::vector<GroundTruthBox> gt{walker(1, {0, 0, 20, 40})};
  auto d = oracle_detect(gt, {8, 0, 108, 100}, 100, 100, quiet(), 0);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].box, (BoundingBox{0, 0, 12, 40}));
  EXPECT_TRUE(oracle_detect(gt, {12, 0, 112, 100}, 100, 100, quiet(), 0).empty());
}

TEST(OracleDetector, SkipsNonPedestrians) {
  auto g = walker(1, {0, 0, 20, 40});
  g.role = EvalRole::ignore;
  auto h = walker(2, {30, 0, 50, 40});
  h.role = EvalRole::excluded;
  const std::vector<GroundTruthBox> gt{g, h};
  EXPECT_TRUE(oracle_detect(gt, {0, 0, 100, 100}, 100, 100, quiet(), 0).empty());
}

TEST(OracleDetector, DeterministicAndOrderIndependent) {
  OracleConfig cfg;
  cfg.rng_seed = 42;
  cfg.flicker_prob = 0.5;
  std::vector<GroundTruthBox> gt;
  for (int i = 0; i < 20; ++i) gt.push_back(walker(i + 1, {50.0 * i, 100, 50.0 * i + 30, 180}));
  const auto a = oracle_detect(gt, kFrame, 416, 416, cfg, 7);
  const auto b = oracle_detect(gt, kFrame, 416, 416, cfg, 7);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].box, b[i].box);
    EXPECT_EQ(a[i].confidence, b[i].confidence);
  }
  const std::vector<GroundTruthBox> rev(gt.rbegin(), gt.rend());
  const auto c = oracle_detect(rev, kFrame, 416, 416, cfg, 7);
  ASSERT_EQ(c.size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].box, c[c.size() - 1 - i].box);
  const auto other = oracle_detect(gt, kFrame, 416, 416, cfg, 8);
  bool differs = false;
  for (std::size_t i = 0; i < std::min(a.size(), other.size()); ++i)
    differs |= !(a[i].box == other[i].box);
  EXPECT_TRUE(differs);
}

TEST(OracleDetector, VisibilityMonotoneInInputSize) {
  std::vector<GroundTruthBox> gt;
  for (int h = 10; h < 80; ++h)
    gt.push_back(walker(h, {20.0 * h, 300, 20.0 * h + 0.4 * h, 300.0 + h}));
  std::size_t prev = 0;
  for (int side = 128; side <= 1920; side += 64) {
    const auto n = oracle_detect(gt, kFrame, side, side, quiet(), 0).size();
    EXPECT_GE(n, prev) << side;
    prev = n;
  }
}

TEST(OracleDetector, JitterBoundedByDownscale) {
  OracleConfig cfg;
  const std::vector<GroundTruthBox> gt{walker(1, {500, 500, 540, 600})};
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    cfg.rng_seed = seed;
    for (int side : {1920, 960, 416}) {
      const auto d = oracle_detect(gt, kFrame, side, side, cfg, 3);
      ASSERT_EQ(d.size(), 1u);
      const BoundingBox back = RegionTransform(kFrame, side, side).to_frame(d[0].box);
      const double down_x = 1920.0 / side, down_y = 1080.0 / side;
      EXPECT_LE(std::abs(back.x_min - 500), 0.05 * down_x * 40 + 1e-9);
      EXPECT_LE(std::abs(back.y_max - 600), 0.05 * down_y * 100 + 1e-9);
    }
  }
}

TEST(OracleDetector, FlickerRateRoughlyMatches) {
  OracleConfig cfg = quiet();
  cfg.flicker_prob = 0.3;
  std::vector<GroundTruthBox> gt;
  for (int i = 0; i < 30; ++i) gt.push_back(walker(i + 1, {60.0 * i, 100, 60.0 * i + 30, 180}));
  std::size_t degraded = 0, total = 0;
  for (std::size_t f = 0; f < 200; ++f)
    for (const auto& d : oracle_detect(gt, kFrame, 1920, 1080, cfg, f)) {
      ++total;
      degraded += d.confidence == cfg.degraded_confidence;
    }
  EXPECT_NEAR(double(degraded) / double(total), 0.3, 0.03);
}

TEST(OracleDetector, UnknownFrameGivesNothing) {
  AnnotationSet truth;
  truth.frames.resize(2);
  truth.frames[1].push_back(walker(1, {0, 0, 40, 100}));
  OracleDetector det(truth, quiet());
  EXPECT_TRUE(det.concurrent_safe());
  EXPECT_EQ(det.detect({1}, kFrame, 1920, 1080).size(), 1u);
  EXPECT_TRUE(det.detect({5}, kFrame, 1920, 1080).empty());
}

TEST(Protocol, RequestFormat) {
  EXPECT_EQ(format_detect_request(12, {10, 20.5, 458, 276.25}, 224, 128),
            "DETECT 12 10 20.5 458 276.25 224 128");
}

TEST(Protocol, EmptyResponse) { EXPECT_TRUE(replay("empty.txt").empty()); }

TEST(Protocol, SingleBoxParsedExactly) {
  const auto d = replay("one_box.txt");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].box, (BoundingBox{12.5, 30.25, 60.125, 140.0625}));
  EXPECT_EQ(d[0].confidence, 0.873);
}

TEST(Protocol, MalformedResponsesThrow) {
  for (const char* name : {"truncated.txt", "bad_header.txt", "short_line.txt", "bad_number.txt",
                           "inverted.txt", "bad_confidence.txt", "negative_count.txt"})
    EXPECT_THROW(replay(name), DetectorError) << name;
}

TEST(Protocol, ExternalDetectorOverStreams) {
  std::istringstream in(slurp(kFixtures + "/protocol/one_box.txt"));
  std::ostringstream out;
  ExternalDetector det(std::make_unique<StreamChannel>(in, out));
  EXPECT_EQ(det.detect({4}, {0, 0, 100, 50}, 224, 128).size(), 1u);
  EXPECT_EQ(out.str(), "DETECT 4 0 0 100 50 224 128\n");
  EXPECT_FALSE(det.concurrent_safe());
}

TEST(Protocol, ChildProcessRoundTrip) {
  ExternalDetector det(std::make_unique<ProcessChannel>(
      "sh " + kFixtures + "/protocol/echo_detector.sh", std::chrono::milliseconds(5000)));
  for (std::size_t f = 0; f < 3; ++f) {
    const auto d = det.detect({f}, {0, 0, 448, 256}, 224, 128);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d[0].box, (BoundingBox{0, 0, 112, 64}));
    EXPECT_EQ(d[0].confidence, 0.9);
  }
}

TEST(Protocol, ChildProcessTimeout) {
  ExternalDetector det(std::make_unique<ProcessChannel>(
      "sh " + kFixtures + "/protocol/silent_detector.sh", std::chrono::milliseconds(200)));
  EXPECT_THROW(det.detect({0}, {0, 0, 10, 10}, 10, 10), DetectorError);
}

TEST(Protocol, ChildProcessExitIsError) {
  ExternalDetector det(std::make_unique<ProcessChannel>("true", std::chrono::milliseconds(2000)));
  EXPECT_THROW(det.detect({0}, {0, 0, 10, 10}, 10, 10), DetectorError);
}
