#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "pedcrop/geometry.hpp"

namespace pedcrop {

enum class AnnotationFormat { visdrone, darklabel_csv };
std::string to_string(AnnotationFormat format);
AnnotationFormat parse_annotation_format(const std::string& text);

/// How a ground-truth box takes part in evaluation.
enum class EvalRole {
  pedestrian,  // matched and counted
  ignore,      // ignore region: neither a miss nor a source of false positives
  excluded,    // other or unknown category, kept only in raw form
};

// VisDrone category ids.
inline constexpr int kVisDroneIgnoredRegion = 0;
inline constexpr int kVisDronePedestrian = 1;

struct GroundTruthBox {
  BoundingBox box;
  int object_id = 0;
  EvalRole role = EvalRole::pedestrian;

  // Raw columns, kept so a set can be written back out unchanged.
  int category = kVisDronePedestrian;
  std::string label;  // DarkLabel class name
  int score = 1;
  int truncation = 0;
  int occlusion = 0;

  friend bool operator==(const GroundTruthBox&, const GroundTruthBox&) = default;
};

struct AnnotationSet {
  FrameDims dims{1920, 1080};
  /// Index = 0-based frame number. Frames without boxes are empty.
  std::vector<std::vector<GroundTruthBox>> frames;

  std::size_t frame_count() const { return frames.size(); }
  std::size_t pedestrian_count() const;

  friend bool operator==(const AnnotationSet&, const AnnotationSet&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// VisDrone MOT: `frame,target_id,x,y,w,h,score,category[,truncation,occlusion]`
/// with 1-based frames. Category 1 is pedestrian; category 0, or a pedestrian
/// with score 0, is an ignore region; anything else is excluded.
///
/// DarkLabel CSV: `frame,classname,id,x,y,w,h` with 0-based frames. Class
/// names `person`/`pedestrian` are pedestrians, `ignore` marks an ignore
/// region. Lines starting with `#` are skipped in both formats.
///
/// Boxes are clipped to `dims`. Throws ParseError on a malformed line.
AnnotationSet parse_annotations(const std::string& text, AnnotationFormat format,
                                FrameDims dims = {1920, 1080});

/// Reads the file; throws std::runtime_error if it cannot be opened.
AnnotationSet load_annotations(const std::filesystem::path& path, AnnotationFormat format,
                               FrameDims dims = {1920, 1080});

/// Inverse of parse_annotations for the given format.
std::string serialize_annotations(const AnnotationSet& set, AnnotationFormat format);

}  // namespace pedcrop
