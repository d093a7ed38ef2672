#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "pedcrop/evaluation.hpp"
#include "pedcrop/run_config.hpp"

namespace pedcrop::cli {

struct SequenceOutcome {
  std::filesystem::path dataset;
  std::filesystem::path output_dir;
  EvalReport report;
  Throughput throughput;
  std::size_t full_frame_calls = 0;
  std::size_t crop_calls = 0;
};

/// Replays one annotated sequence and writes frames.jsonl, eval.json,
/// pr_curve.csv, summary.json, config.txt and timing.json into `output_dir`.
/// Everything except timing.json is a pure function of the configuration.
SequenceOutcome run_sequence(const RunConfig& cfg, const std::filesystem::path& dataset,
                             const std::filesystem::path& output_dir);

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Returns the process exit code.
int run_command_line(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pedcrop::cli
