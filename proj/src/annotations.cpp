#include "pedcrop/annotations.hpp"

#include <fstream>
#include <sstream>

#include "pedcrop/text.hpp"

namespace pedcrop {

std::string to_string(AnnotationFormat format) {
  return format == AnnotationFormat::visdrone ? "visdrone" : "darklabel";
}

AnnotationFormat parse_annotation_format(const std::string& text) {
  if (text == "visdrone") return AnnotationFormat::visdrone;
  if (text == "darklabel" || text == "darklabel_csv") return AnnotationFormat::darklabel_csv;
  throw std::invalid_argument("unknown annotation format '" + text + "'");
}

std::size_t AnnotationSet::pedestrian_count() const {
  std::size_t n = 0;
  for (const auto& frame : frames)
    for (const auto& gt : frame) n += gt.role == EvalRole::pedestrian;
  return n;
}

namespace {

struct LineReader {
  std::size_t line_no;

  long long integer(std::string_view field, const char* name) const {
    auto v = text::parse_int(field);
    if (!v) throw ParseError(line_no, std::string("bad ") + name + " '" + std::string(field) + "'");
    return *v;
  }

  double number(std::string_view field, const char* name) const {
    auto v = text::parse_double(field);
    if (!v) throw ParseError(line_no, std::string("bad ") + name + " '" + std::string(field) + "'");
    return *v;
  }
};

BoundingBox box_from_xywh(const LineReader& r, double x, double y, double w, double h) {
  if (w < 0.0 || h < 0.0) throw ParseError(r.line_no, "negative box size");
  return {x, y, x + w, y + h};
}

EvalRole visdrone_role(int category, int score) {
  if (category == kVisDroneIgnoredRegion) return EvalRole::ignore;
  if (category == kVisDronePedestrian) return score == 0 ? EvalRole::ignore : EvalRole::pedestrian;
  return EvalRole::excluded;
}

EvalRole darklabel_role(const std::string& label) {
  if (label == "person" || label == "pedestrian") return EvalRole::pedestrian;
  if (label == "ignore") return EvalRole::ignore;
  return EvalRole::excluded;
}

int darklabel_category(EvalRole role) {
  switch (role) {
    case EvalRole::pedestrian: return kVisDronePedestrian;
    case EvalRole::ignore: return kVisDroneIgnoredRegion;
    default: return -1;
  }
}

}  // namespace

AnnotationSet parse_annotations(const std::string& content, AnnotationFormat format,
                                FrameDims dims) {
  if (!dims.valid()) throw std::invalid_argument("parse_annotations: invalid frame size");
  AnnotationSet set;
  set.dims = dims;
  const BoundingBox bounds = dims.rect();

  std::istringstream in(content);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = text::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto f = text::split(body, ',');
    const LineReader r{line_no};

    long long frame = 0;
    GroundTruthBox gt;
    if (format == AnnotationFormat::visdrone) {
      if (f.size() != 8 && f.size() != 10)
        throw ParseError(line_no, "expected 8 or 10 fields, got " + std::to_string(f.size()));
      frame = r.integer(f[0], "frame") - 1;
      if (frame < 0) throw ParseError(line_no, "VisDrone frames are 1-based");
      gt.object_id = int(r.integer(f[1], "target_id"));
      gt.box = box_from_xywh(r, r.number(f[2], "x"), r.number(f[3], "y"), r.number(f[4], "w"),
                             r.number(f[5], "h"));
      gt.score = int(r.integer(f[6], "score"));
      gt.category = int(r.integer(f[7], "category"));
      if (f.size() == 10) {
        gt.truncation = int(r.integer(f[8], "truncation"));
        gt.occlusion = int(r.integer(f[9], "occlusion"));
      }
      gt.role = visdrone_role(gt.category, gt.score);
    } else {
      if (f.size() != 7)
        throw ParseError(line_no, "expected 7 fields, got " + std::to_string(f.size()));
      frame = r.integer(f[0], "frame");
      if (frame < 0) throw ParseError(line_no, "negative frame number");
      gt.label = std::string(f[1]);
      if (gt.label.empty()) throw ParseError(line_no, "empty class name");
      gt.object_id = int(r.integer(f[2], "id"));
      gt.box = box_from_xywh(r, r.number(f[3], "x"), r.number(f[4], "y"), r.number(f[5], "w"),
                             r.number(f[6], "h"));
      gt.role = darklabel_role(gt.label);
      gt.category = darklabel_category(gt.role);
    }
    gt.box = clip_to(gt.box, bounds);
    if (set.frames.size() <= std::size_t(frame)) set.frames.resize(std::size_t(frame) + 1);
    set.frames[std::size_t(frame)].push_back(std::move(gt));
  }
  return set;
}

AnnotationSet load_annotations(const std::filesystem::path& path, AnnotationFormat format,
                               FrameDims dims) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open annotation file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_annotations(buf.str(), format, dims);
}

namespace {

std::string darklabel_name(const GroundTruthBox& gt) {
  if (!gt.label.empty()) return gt.label;
  switch (gt.role) {
    case EvalRole::pedestrian: return "person";
    case EvalRole::ignore: return "ignore";
    case EvalRole::excluded: break;
  }
  return "other";
}

}  // namespace

std::string serialize_annotations(const AnnotationSet& set, AnnotationFormat format) {
  using text::format_double;
  std::ostringstream out;
  for (std::size_t frame = 0; frame < set.frames.size(); ++frame) {
    for (const auto& gt : set.frames[frame]) {
      const std::string xywh = format_double(gt.box.x_min) + ',' + format_double(gt.box.y_min) +
                               ',' + format_double(gt.box.width()) + ',' +
                               format_double(gt.box.height());
      if (format == AnnotationFormat::visdrone) {
        out << frame + 1 << ',' << gt.object_id << ',' << xywh << ',' << gt.score << ','
            << gt.category << ',' << gt.truncation << ',' << gt.occlusion << '\n';
      } else {
        out << frame << ',' << darklabel_name(gt) << ',' << gt.object_id << ',' << xywh << '\n';
      }
    }
  }
  return out.str();
}

}  // namespace pedcrop
