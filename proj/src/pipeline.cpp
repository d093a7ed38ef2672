#include "pedcrop/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <numeric>

namespace pedcrop {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct DetectorCall {
  BoundingBox region;
  int input_width;
  int input_height;
  DetectionSource source;
};

struct CallOutput {
  DetectionList detections;
  double seconds = 0.0;
};

CallOutput run_call(Detector& detector, const FrameRef& frame, const DetectorCall& call) {
  const auto start = Clock::now();
  CallOutput out{detector.detect(frame, call.region, call.input_width, call.input_height)};
  out.seconds = seconds_since(start);
  return out;
}

}  // namespace

void PipelineConfig::validate() const {
  if (full_frame_period < 1) throw std::invalid_argument("pipeline: full_frame_period must be >= 1");
  if (full_frame_width < 1 || full_frame_height < 1)
    throw std::invalid_argument("pipeline: full-frame input size must be positive");
  large_tier.validate();
  small_tier.validate();
  temporal.validate();
  if (!(nms_iou > 0.0 && nms_iou <= 1.0)) throw std::invalid_argument("pipeline: nms_iou must be in (0, 1]");
  if (!(coverage_threshold > 0.0 && coverage_threshold <= 1.0))
    throw std::invalid_argument("pipeline: coverage_threshold must be in (0, 1]");
}

FrameError::FrameError(std::size_t frame, const BoundingBox& region, const std::string& cause)
    : std::runtime_error("frame " + std::to_string(frame) + ": detector failed on region (" +
                         std::to_string(region.x_min) + ", " + std::to_string(region.y_min) +
                         ", " + std::to_string(region.x_max) + ", " +
                         std::to_string(region.y_max) + "): " + cause),
      frame_(frame),
      region_(region) {}

DetectionList merge_detections(std::span<const DetectionList> lists, double nms_iou) {
  DetectionList all;
  for (const auto& list : lists) all.insert(all.end(), list.begin(), list.end());
  std::stable_sort(all.begin(), all.end(), [](const Detection& a, const Detection& b) {
    return a.confidence > b.confidence;
  });

  DetectionList kept;
  for (const Detection& d : all) {
    const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](const Detection& k) {
      return iou(d.box, k.box) > nms_iou;
    });
    if (!suppressed) kept.push_back(d);
  }
  return kept;
}

bool is_refresh_frame(std::size_t frame_index, const PipelineConfig& cfg) {
  return cfg.full_frame_only || frame_index % std::size_t(cfg.full_frame_period) == 0;
}

FrameOutcome process_frame(const FrameRef& frame, const FrameDims& dims, const FrameState& state,
                           Detector& detector, const PipelineConfig& cfg) {
  const auto frame_start = Clock::now();
  FrameOutcome out;
  FrameResult& result = out.result;
  result.frame_index = frame.index;
  result.refresh = is_refresh_frame(frame.index, cfg);

  std::vector<DetectorCall> calls;
  if (result.refresh) {
    calls.push_back({dims.rect(), cfg.full_frame_width, cfg.full_frame_height,
                     DetectionSource::full_frame()});
    result.full_frame_calls = 1;
  }
  if (!cfg.full_frame_only && (!result.refresh || cfg.crops_on_refresh)) {
    for (std::size_t i = 0; i < state.active_crops.size(); ++i) {
      const CropRegion& crop = state.active_crops[i];
      calls.push_back({crop.rect, crop.target_width, crop.target_height,
                       DetectionSource::crop(int(i))});
      result.crops_used.push_back(crop);
    }
    result.crop_calls = state.active_crops.size();
  }

  std::vector<CallOutput> outputs(calls.size());
  const bool parallel = cfg.parallel_dispatch && detector.concurrent_safe() && calls.size() > 1;
  std::size_t failed = calls.size();
  std::string cause;
  if (parallel) {
    std::vector<std::future<CallOutput>> pending;
    pending.reserve(calls.size());
    for (const auto& call : calls)
      pending.push_back(std::async(std::launch::async, [&detector, &frame, call] {
        return run_call(detector, frame, call);
      }));
    for (std::size_t i = 0; i < pending.size(); ++i) {
      try {
        outputs[i] = pending[i].get();
      } catch (const std::exception& e) {
        if (failed == calls.size()) {
          failed = i;
          cause = e.what();
        }
      }
    }
  } else {
    for (std::size_t i = 0; i < calls.size() && failed == calls.size(); ++i) {
      try {
        outputs[i] = run_call(detector, frame, calls[i]);
      } catch (const std::exception& e) {
        failed = i;
        cause = e.what();
      }
    }
  }
  if (failed < calls.size()) throw FrameError(frame.index, calls[failed].region, cause);

  const BoundingBox bounds = dims.rect();
  std::vector<DetectionList> remapped(calls.size());
  for (std::size_t i = 0; i < calls.size(); ++i) {
    const DetectorCall& call = calls[i];
    const RegionTransform transform(call.region, call.input_width, call.input_height);
    result.pixels_processed += static_cast<long long>(call.input_width) * call.input_height;
    if (call.source.kind == DetectionSource::Kind::full_frame) {
      result.timing.full_frame_s = outputs[i].seconds;
    } else {
      result.timing.per_crop_s.push_back(outputs[i].seconds);
    }
    for (Detection d : outputs[i].detections) {
      d.box = clip_to(transform.to_frame(d.box), bounds);
      if (d.box.area() <= 0.0) continue;
      d.source = call.source;
      d.resurrected = false;
      remapped[i].push_back(d);
    }
  }

  auto stage_start = Clock::now();
  const DetectionList merged = merge_detections(remapped, cfg.nms_iou);
  const DetectionList no_history;
  FilterResult filtered = filter_detections(
      merged, cfg.temporal_filtering ? std::span<const Detection>(state.genuine_prev) : no_history,
      cfg.temporal);
  result.timing.filter_s = seconds_since(stage_start);

  stage_start = Clock::now();
  std::vector<CropRegion> next_crops;
  if (!cfg.full_frame_only) {
    TwoTierProposal proposal = two_tier_proposal(std::span<const Detection>(filtered.accepted),
                                                 cfg.large_tier, cfg.small_tier, dims,
                                                 cfg.coverage_threshold);
    next_crops = std::move(proposal.large_crops);
    next_crops.insert(next_crops.end(), std::make_move_iterator(proposal.small_crops.begin()),
                      std::make_move_iterator(proposal.small_crops.end()));
  }
  result.timing.proposal_s = seconds_since(stage_start);

  result.detections = std::move(filtered.accepted);
  out.state.frame_index = frame.index + 1;
  out.state.genuine_prev = std::move(filtered.genuine_next);
  out.state.active_crops = std::move(next_crops);
  result.timing.total_s = seconds_since(frame_start);
  return out;
}

long long ReplayResult::total_pixels() const {
  return std::accumulate(frames.begin(), frames.end(), 0LL,
                         [](long long acc, const FrameResult& f) { return acc + f.pixels_processed; });
}

std::vector<DetectionList> ReplayResult::predictions() const {
  std::vector<DetectionList> out;
  out.reserve(frames.size());
  for (const auto& f : frames) out.push_back(f.detections);
  return out;
}

ReplayResult replay(std::size_t frame_count, const FrameDims& dims, Detector& detector,
                    const PipelineConfig& cfg) {
  cfg.validate();
  ReplayResult out;
  out.frames.reserve(frame_count);
  FrameState state;
  for (std::size_t f = 0; f < frame_count; ++f) {
    FrameOutcome step = process_frame(FrameRef{f}, dims, state, detector, cfg);
    out.wall_seconds += step.result.timing.total_s;
    out.frames.push_back(std::move(step.result));
    state = std::move(step.state);
  }
  return out;
}

}  // namespace pedcrop
