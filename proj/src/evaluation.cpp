#include "pedcrop/evaluation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pedcrop {

namespace {

struct Scored {
  double confidence;
  bool true_positive;
};

}  // namespace

EvalReport evaluate_map(std::span<const DetectionList> predictions, const AnnotationSet& truth,
                        const EvalOptions& options) {
  if (predictions.size() > truth.frame_count()) {
    std::string missing;
    for (std::size_t f = truth.frame_count(); f < predictions.size(); ++f) {
      if (!missing.empty()) missing += ',';
      missing += std::to_string(f);
    }
    throw std::invalid_argument("predictions reference frames missing from annotations: " +
                                missing);
  }

  EvalReport report;
  report.ground_truth = truth.pedestrian_count();

  std::vector<Scored> scored;
  for (std::size_t f = 0; f < predictions.size(); ++f) {
    const auto& gts = truth.frames[f];
    const auto& preds = predictions[f];
    std::vector<std::size_t> order(preds.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return preds[a].confidence > preds[b].confidence;
    });

    std::vector<bool> matched(gts.size(), false);
    for (std::size_t p : order) {
      const Detection& det = preds[p];
      if (det.class_id != kPedestrianClass) continue;
      double best = -1.0;
      std::size_t best_gt = gts.size();
      for (std::size_t g = 0; g < gts.size(); ++g) {
        if (matched[g] || gts[g].role != EvalRole::pedestrian) continue;
        const double o = iou(det.box, gts[g].box);
        if (o > best) {
          best = o;
          best_gt = g;
        }
      }
      if (best_gt < gts.size() && best >= options.iou_threshold) {
        matched[best_gt] = true;
        scored.push_back({det.confidence, true});
        continue;
      }
      const bool in_ignore = std::any_of(gts.begin(), gts.end(), [&](const GroundTruthBox& g) {
        return g.role == EvalRole::ignore &&
               covered_fraction(det.box, g.box) >= options.ignore_coverage;
      });
      if (!in_ignore) scored.push_back({det.confidence, false});
    }
  }

  std::stable_sort(scored.begin(), scored.end(),
                   [](const Scored& a, const Scored& b) { return a.confidence > b.confidence; });
  std::size_t tp = 0;
  std::size_t fp = 0;
  report.pr_curve.reserve(scored.size());
  for (const auto& s : scored) {
    s.true_positive ? ++tp : ++fp;
    const double recall = report.ground_truth ? double(tp) / report.ground_truth : 0.0;
    report.pr_curve.push_back({recall, double(tp) / (tp + fp)});
  }
  report.true_positives = tp;
  report.false_positives = fp;
  report.false_negatives = report.ground_truth - tp;
  report.ap = report.ground_truth ? average_precision(report.pr_curve, options.interpolation) : 0.0;
  report.map = report.ap;
  return report;
}

double average_precision(std::span<const PrPoint> curve, ApInterpolation interpolation) {
  if (curve.empty()) return 0.0;
  if (interpolation == ApInterpolation::eleven_point) {
    double sum = 0.0;
    for (int i = 0; i <= 10; ++i) {
      const double t = i / 10.0;
      double best = 0.0;
      for (const auto& p : curve)
        if (p.recall >= t) best = std::max(best, p.precision);
      sum += best;
    }
    return sum / 11.0;
  }

  std::vector<double> rec{0.0};
  std::vector<double> prec{0.0};
  for (const auto& p : curve) {
    rec.push_back(p.recall);
    prec.push_back(p.precision);
  }
  rec.push_back(1.0);
  prec.push_back(0.0);
  for (std::size_t i = prec.size() - 1; i > 0; --i) prec[i - 1] = std::max(prec[i - 1], prec[i]);
  // Sum whole plateaus of the envelope so a flat curve integrates exactly.
  double ap = 0.0;
  std::size_t start = 0;
  for (std::size_t i = 1; i < rec.size(); ++i) {
    if (i + 1 < rec.size() && prec[i + 1] == prec[i]) continue;
    ap += (rec[i] - rec[start]) * prec[i];
    start = i;
  }
  return ap;
}

Throughput measure_fps(std::size_t frames, double seconds, long long total_pixels_processed) {
  if (frames == 0) throw std::invalid_argument("measure_fps: no frames");
  if (!(seconds > 0.0)) throw std::invalid_argument("measure_fps: elapsed time must be positive");
  return {frames, seconds, frames / seconds, double(total_pixels_processed) / frames};
}

}  // namespace pedcrop
