#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pedcrop/annotations.hpp"
#include "pedcrop/evaluation.hpp"
#include "pedcrop/oracle_detector.hpp"
#include "pedcrop/pipeline.hpp"

namespace pedcrop {

enum class DetectorKind { oracle, external };

/// Everything needed to reproduce a replay run.
struct RunConfig {
  std::vector<std::filesystem::path> datasets;
  AnnotationFormat format = AnnotationFormat::visdrone;
  FrameDims dims{1920, 1080};

  DetectorKind detector = DetectorKind::oracle;
  std::string external_command;
  int external_timeout_ms = 10000;

  PipelineConfig pipeline;
  OracleConfig oracle;
  EvalOptions eval;

  std::filesystem::path output_dir = "out";
  /// Single source of randomness; copied into the oracle seed.
  std::uint64_t seed = 0;
  bool emit_timing = false;
  int parallel_sequences = 1;

  /// Throws std::invalid_argument when any sub-config is invalid.
  void validate() const;
};

/// Sets one flat key such as `large.k` or `temporal.conf_genuine`. Throws
/// std::invalid_argument for an unknown key or an unparsable value.
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

/// Applies `key = value` lines; `#` starts a comment.
void apply_config_text(RunConfig& cfg, const std::string& text);
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);

/// Fully resolved configuration in the same flat format, one key per line,
/// in a fixed order. Feeding it back through apply_config_text reproduces
/// the configuration.
std::string echo_config(const RunConfig& cfg);

/// All keys accepted by set_config_value.
std::vector<std::string> config_keys();

}  // namespace pedcrop
