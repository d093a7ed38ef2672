#include "pedcrop/external_detector.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>
#include <istream>
#include <ostream>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include "pedcrop/text.hpp"

namespace pedcrop {

void StreamChannel::write_line(const std::string& line) {
  out_ << line << '\n';
  out_.flush();
  if (!out_) throw DetectorError("external detector: write failed");
}

std::optional<std::string> StreamChannel::read_line() {
  std::string line;
  if (!std::getline(in_, line)) return std::nullopt;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

namespace {

std::string errno_text(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

}  // namespace

ProcessChannel::ProcessChannel(const std::string& command, std::chrono::milliseconds timeout)
    : timeout_(timeout) {
  int in_pipe[2];
  int out_pipe[2];
  if (pipe(in_pipe) != 0) throw DetectorError(errno_text("external detector: pipe"));
  if (pipe(out_pipe) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    throw DetectorError(errno_text("external detector: pipe"));
  }
  std::signal(SIGPIPE, SIG_IGN);

  pid_ = fork();
  if (pid_ < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
    throw DetectorError(errno_text("external detector: fork"));
  }
  if (pid_ == 0) {
    setpgid(0, 0);
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid_, pid_);
  close(in_pipe[0]);
  close(out_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  fcntl(to_child_, F_SETFD, FD_CLOEXEC);
  fcntl(from_child_, F_SETFD, FD_CLOEXEC);
}

ProcessChannel::~ProcessChannel() {
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
  if (pid_ > 0) {
    int status = 0;
    for (int i = 0; i < 50; ++i) {
      if (waitpid(pid_, &status, WNOHANG) == pid_) return;
      usleep(2000);
    }
    // Whole group, so helpers the shell spawned die too.
    kill(-pid_, SIGKILL);
    waitpid(pid_, &status, 0);
  }
}

void ProcessChannel::write_line(const std::string& line) {
  const std::string data = line + '\n';
  std::size_t done = 0;
  while (done < data.size()) {
    const ssize_t n = write(to_child_, data.data() + done, data.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw DetectorError(errno_text("external detector: write"));
    }
    done += std::size_t(n);
  }
}

std::optional<std::string> ProcessChannel::read_line() {
  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  while (true) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    if (eof_) {
      if (buffer_.empty()) return std::nullopt;
      std::string line;
      line.swap(buffer_);
      return line;
    }

    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) throw DetectorError("external detector: response timed out");
    pollfd pfd{from_child_, POLLIN, 0};
    const int ready = poll(&pfd, 1, int(left.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw DetectorError(errno_text("external detector: poll"));
    }
    if (ready == 0) throw DetectorError("external detector: response timed out");

    char chunk[4096];
    const ssize_t n = read(from_child_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw DetectorError(errno_text("external detector: read"));
    }
    if (n == 0) eof_ = true;
    buffer_.append(chunk, std::size_t(n));
  }
}

std::string format_detect_request(std::size_t frame_id, const BoundingBox& region, int input_width,
                                  int input_height) {
  using text::format_double;
  return "DETECT " + std::to_string(frame_id) + ' ' + format_double(region.x_min) + ' ' +
         format_double(region.y_min) + ' ' + format_double(region.x_max) + ' ' +
         format_double(region.y_max) + ' ' + std::to_string(input_width) + ' ' +
         std::to_string(input_height);
}

DetectionList read_boxes_response(LineChannel& channel) {
  auto header = channel.read_line();
  if (!header) throw DetectorError("external detector: end of stream before BOXES header");
  const auto head = text::split_ws(*header);
  if (head.size() != 2 || head[0] != "BOXES")
    throw DetectorError("external detector: expected 'BOXES <n>', got '" + *header + "'");
  const auto count = text::parse_int(head[1]);
  if (!count || *count < 0)
    throw DetectorError("external detector: bad box count '" + std::string(head[1]) + "'");

  DetectionList out;
  out.reserve(std::size_t(*count));
  for (long long i = 0; i < *count; ++i) {
    auto line = channel.read_line();
    if (!line)
      throw DetectorError("external detector: stream ended after " + std::to_string(i) + " of " +
                          std::to_string(*count) + " boxes");
    const auto fields = text::split_ws(*line);
    if (fields.size() != 5)
      throw DetectorError("external detector: box line " + std::to_string(i + 1) +
                          " needs 5 fields: '" + *line + "'");
    double v[5];
    for (std::size_t j = 0; j < 5; ++j) {
      auto parsed = text::parse_double(fields[j]);
      if (!parsed)
        throw DetectorError("external detector: box line " + std::to_string(i + 1) +
                            " has bad number '" + std::string(fields[j]) + "'");
      v[j] = *parsed;
    }
    Detection det;
    det.box = {v[0], v[1], v[2], v[3]};
    det.confidence = v[4];
    if (!det.box.valid())
      throw DetectorError("external detector: box line " + std::to_string(i + 1) + " is inverted");
    if (det.confidence < 0.0 || det.confidence > 1.0)
      throw DetectorError("external detector: box line " + std::to_string(i + 1) +
                          " confidence outside [0, 1]");
    out.push_back(det);
  }
  return out;
}

ExternalDetector::ExternalDetector(std::unique_ptr<LineChannel> channel)
    : channel_(std::move(channel)) {
  if (!channel_) throw std::invalid_argument("ExternalDetector: null channel");
}

DetectionList ExternalDetector::detect(const FrameRef& frame, const BoundingBox& region,
                                       int input_width, int input_height) {
  channel_->write_line(format_detect_request(frame.index, region, input_width, input_height));
  return read_boxes_response(*channel_);
}

}  // namespace pedcrop
