#include "pedcrop/json_io.hpp"

#include <istream>
#include <sstream>
#include <stdexcept>

#include "pedcrop/text.hpp"

namespace pedcrop {

using nlohmann::json;

json crop_to_json(const CropRegion& crop) {
  return {{"x_min", crop.rect.x_min},       {"y_min", crop.rect.y_min},
          {"x_max", crop.rect.x_max},       {"y_max", crop.rect.y_max},
          {"tier", to_string(crop.tier)},   {"target_w", crop.target_width},
          {"target_h", crop.target_height}, {"members", crop.members}};
}

json detection_to_json(const Detection& det) {
  return {{"x_min", det.box.x_min},
          {"y_min", det.box.y_min},
          {"x_max", det.box.x_max},
          {"y_max", det.box.y_max},
          {"confidence", det.confidence},
          {"source", det.source.to_string()},
          {"resurrected", det.resurrected}};
}

Detection detection_from_json(const json& j) {
  Detection d;
  d.box = {j.at("x_min").get<double>(), j.at("y_min").get<double>(), j.at("x_max").get<double>(),
           j.at("y_max").get<double>()};
  d.confidence = j.at("confidence").get<double>();
  if (j.contains("source")) d.source = DetectionSource::parse(j["source"].get<std::string>());
  if (j.contains("resurrected")) d.resurrected = j["resurrected"].get<bool>();
  if (!d.box.valid()) throw std::invalid_argument("detection box is inverted or non-finite");
  return d;
}

json crop_dump(std::size_t frame, const TwoTierProposal& proposal) {
  json large = json::array();
  json small = json::array();
  for (const auto& c : proposal.large_crops) large.push_back(crop_to_json(c));
  for (const auto& c : proposal.small_crops) small.push_back(crop_to_json(c));
  return {{"frame", frame}, {"large_crops", large}, {"small_crops", small}};
}

json frame_result_to_json(const FrameResult& r, bool include_timing) {
  json dets = json::array();
  for (const auto& d : r.detections) dets.push_back(detection_to_json(d));
  json crops = json::array();
  for (const auto& c : r.crops_used) crops.push_back(crop_to_json(c));
  json out = {{"frame", r.frame_index},
              {"refresh", r.refresh},
              {"detections", dets},
              {"crops", crops},
              {"pixels_processed", r.pixels_processed}};
  if (include_timing) {
    out["timing"] = {{"full_frame_s", r.timing.full_frame_s},
                     {"per_crop_s", r.timing.per_crop_s},
                     {"proposal_s", r.timing.proposal_s},
                     {"filter_s", r.timing.filter_s},
                     {"total_s", r.timing.total_s}};
  }
  return out;
}

json eval_report_to_json(const EvalReport& r) {
  return {{"ap", r.ap},
          {"map", r.map},
          {"precision", r.precision()},
          {"recall", r.recall()},
          {"true_positives", r.true_positives},
          {"false_positives", r.false_positives},
          {"false_negatives", r.false_negatives},
          {"ground_truth", r.ground_truth}};
}

json throughput_to_json(const Throughput& t) {
  return {{"frames", t.frames},
          {"seconds", t.seconds},
          {"fps", t.fps},
          {"mean_pixels_processed", t.mean_pixels_processed}};
}

std::string pr_curve_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "recall,precision\n";
  for (const auto& p : report.pr_curve)
    out << text::format_double(p.recall) << ',' << text::format_double(p.precision) << '\n';
  return out.str();
}

std::vector<DetectionList> read_predictions(std::istream& in) {
  std::vector<DetectionList> frames;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      const json j = json::parse(line);
      const auto frame = j.at("frame").get<long long>();
      if (frame < 0) throw std::invalid_argument("negative frame index");
      if (frames.size() <= std::size_t(frame)) frames.resize(std::size_t(frame) + 1);
      for (const auto& d : j.at("detections")) frames[std::size_t(frame)].push_back(detection_from_json(d));
    } catch (const std::exception& e) {
      throw std::runtime_error("predictions line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return frames;
}

}  // namespace pedcrop
