#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "pedcrop/crop_proposal.hpp"
#include "pedcrop/evaluation.hpp"
#include "pedcrop/pipeline.hpp"

namespace pedcrop {

nlohmann::json crop_to_json(const CropRegion& crop);
nlohmann::json detection_to_json(const Detection& det);
Detection detection_from_json(const nlohmann::json& j);

/// `{frame, large_crops[], small_crops[]}`
nlohmann::json crop_dump(std::size_t frame, const TwoTierProposal& proposal);

/// One line of the per-frame output stream. Timing is wall-clock dependent,
/// so it is only included on request.
nlohmann::json frame_result_to_json(const FrameResult& result, bool include_timing);

nlohmann::json eval_report_to_json(const EvalReport& report);
nlohmann::json throughput_to_json(const Throughput& t);

/// `recall,precision` rows with a header line.
std::string pr_curve_csv(const EvalReport& report);

/// Reads a per-frame JSON-lines stream back into per-frame detection lists,
/// indexed by each line's `frame` field. Frames with no line stay empty.
/// Throws std::runtime_error with the line number on bad input.
std::vector<DetectionList> read_predictions(std::istream& in);

}  // namespace pedcrop
