#include "pedcrop/detection.hpp"

#include <charconv>
#include <stdexcept>

namespace pedcrop {

std::string DetectionSource::to_string() const {
  if (kind == Kind::full_frame) return "full_frame";
  return "crop:" + std::to_string(crop_id);
}

DetectionSource DetectionSource::parse(const std::string& text) {
  if (text == "full_frame") return full_frame();
  constexpr std::string_view prefix = "crop:";
  if (text.rfind(prefix, 0) == 0) {
    int id = 0;
    const char* first = text.data() + prefix.size();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, id);
    if (ec == std::errc{} && ptr == last && first != last) return crop(id);
  }
  throw std::invalid_argument("unrecognized detection source '" + text + "'");
}

}  // namespace pedcrop
