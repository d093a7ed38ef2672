#pragma once

#include <chrono>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <sys/types.h>

#include "pedcrop/detector.hpp"

namespace pedcrop {

/// Newline-delimited text transport to an external detector.
class LineChannel {
 public:
  virtual ~LineChannel() = default;
  virtual void write_line(const std::string& line) = 0;
  /// Next line without its terminator; nullopt at end of stream. Throws
  /// DetectorError on timeout or I/O failure.
  virtual std::optional<std::string> read_line() = 0;
};

/// Channel over a pair of iostreams; used for golden-file replay.
class StreamChannel final : public LineChannel {
 public:
  StreamChannel(std::istream& in, std::ostream& out) : in_(in), out_(out) {}
  void write_line(const std::string& line) override;
  std::optional<std::string> read_line() override;

 private:
  std::istream& in_;
  std::ostream& out_;
};

/// Spawns `/bin/sh -c command` and talks to it over its stdin/stdout.
class ProcessChannel final : public LineChannel {
 public:
  ProcessChannel(const std::string& command, std::chrono::milliseconds timeout);
  ~ProcessChannel() override;
  ProcessChannel(const ProcessChannel&) = delete;
  ProcessChannel& operator=(const ProcessChannel&) = delete;

  void write_line(const std::string& line) override;
  std::optional<std::string> read_line() override;

 private:
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::chrono::milliseconds timeout_;
  std::string buffer_;
  bool eof_ = false;
};

/// `DETECT <frame_id> <x_min> <y_min> <x_max> <y_max> <input_w> <input_h>`
std::string format_detect_request(std::size_t frame_id, const BoundingBox& region, int input_width,
                                  int input_height);

/// Reads `BOXES <n>` followed by n lines `<x_min> <y_min> <x_max> <y_max>
/// <confidence>`. Throws DetectorError on malformed or truncated input.
DetectionList read_boxes_response(LineChannel& channel);

/// Detector speaking the line protocol. One request in flight at a time, so
/// it is never concurrent-safe.
class ExternalDetector final : public Detector {
 public:
  explicit ExternalDetector(std::unique_ptr<LineChannel> channel);

  DetectionList detect(const FrameRef& frame, const BoundingBox& region, int input_width,
                       int input_height) override;

 private:
  std::unique_ptr<LineChannel> channel_;
};

}  // namespace pedcrop
