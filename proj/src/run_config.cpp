#include "pedcrop/run_config.hpp"

#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "pedcrop/text.hpp"

namespace pedcrop {

namespace {

[[noreturn]] void bad_value(const std::string& key, std::string_view value) {
  throw std::invalid_argument("config: bad value '" + std::string(value) + "' for " + key);
}

struct Field {
  std::string key;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

// Each helper binds a key to a member reached through a projection that
// works on both const and mutable configs.
template <typename Project>
Field double_field(std::string key, Project project) {
  return {key,
          [key, project](RunConfig& c, std::string_view v) {
            auto parsed = text::parse_double(v);
            if (!parsed) bad_value(key, v);
            project(c) = *parsed;
          },
          [project](const RunConfig& c) {
            return text::format_double(project(c));
          }};
}

template <typename Project>
Field int_field(std::string key, Project project) {
  return {key,
          [key, project](RunConfig& c, std::string_view v) {
            auto parsed = text::parse_int(v);
            if (!parsed) bad_value(key, v);
            using T = std::remove_reference_t<decltype(project(c))>;
            if constexpr (std::is_unsigned_v<T>) {
              if (*parsed < 0) bad_value(key, v);
            }
            project(c) = static_cast<T>(*parsed);
          },
          [project](const RunConfig& c) {
            return std::to_string(project(c));
          }};
}

template <typename Project>
Field bool_field(std::string key, Project project) {
  return {key,
          [key, project](RunConfig& c, std::string_view v) {
            if (v == "true" || v == "1" || v == "on") {
              project(c) = true;
            } else if (v == "false" || v == "0" || v == "off") {
              project(c) = false;
            } else {
              bad_value(key, v);
            }
          },
          [project](const RunConfig& c) {
            return std::string(project(c) ? "true" : "false");
          }};
}

void add_tier(std::vector<Field>& fields, const std::string& prefix,
              CropTierConfig PipelineConfig::*tier) {
  auto t = [tier](auto& c) -> auto& { return c.pipeline.*tier; };
  fields.push_back(int_field(prefix + ".k", [t](auto& c) -> auto& { return t(c).k; }));
  fields.push_back(double_field(prefix + ".max_width", [t](auto& c) -> auto& { return t(c).max_width; }));
  fields.push_back(double_field(prefix + ".max_height", [t](auto& c) -> auto& { return t(c).max_height; }));
  fields.push_back(int_field(prefix + ".target_width", [t](auto& c) -> auto& { return t(c).target_width; }));
  fields.push_back(int_field(prefix + ".target_height", [t](auto& c) -> auto& { return t(c).target_height; }));
  fields.push_back(double_field(prefix + ".pad_fraction", [t](auto& c) -> auto& { return t(c).pad_fraction; }));
  fields.push_back(double_field(prefix + ".min_pad_px", [t](auto& c) -> auto& { return t(c).min_pad_px; }));
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back({"datasets",
                 [](RunConfig& c, std::string_view v) {
                   c.datasets.clear();
                   if (v.empty()) return;
                   for (auto part : text::split(v, ','))
                     if (!part.empty()) c.datasets.emplace_back(std::string(part));
                 },
                 [](const RunConfig& c) {
                   std::string out;
                   for (const auto& p : c.datasets) {
                     if (!out.empty()) out += ',';
                     out += p.string();
                   }
                   return out;
                 }});
    f.push_back({"format",
                 [](RunConfig& c, std::string_view v) {
                   c.format = parse_annotation_format(std::string(v));
                 },
                 [](const RunConfig& c) { return to_string(c.format); }});
    f.push_back(int_field("frame_width", [](auto& c) -> auto& { return c.dims.width; }));
    f.push_back(int_field("frame_height", [](auto& c) -> auto& { return c.dims.height; }));
    f.push_back({"detector",
                 [](RunConfig& c, std::string_view v) {
                   if (v == "oracle") {
                     c.detector = DetectorKind::oracle;
                   } else if (v == "external") {
                     c.detector = DetectorKind::external;
                   } else {
                     bad_value("detector", v);
                   }
                 },
                 [](const RunConfig& c) {
                   return std::string(c.detector == DetectorKind::oracle ? "oracle" : "external");
                 }});
    f.push_back({"external_command",
                 [](RunConfig& c, std::string_view v) { c.external_command = std::string(v); },
                 [](const RunConfig& c) { return c.external_command; }});
    f.push_back(int_field("external_timeout_ms", [](auto& c) -> auto& { return c.external_timeout_ms; }));
    f.push_back({"output_dir",
                 [](RunConfig& c, std::string_view v) { c.output_dir = std::string(v); },
                 [](const RunConfig& c) { return c.output_dir.string(); }});
    f.push_back(int_field("seed", [](auto& c) -> auto& { return c.seed; }));
    f.push_back(bool_field("emit_timing", [](auto& c) -> auto& { return c.emit_timing; }));
    f.push_back(int_field("parallel_sequences", [](auto& c) -> auto& { return c.parallel_sequences; }));

    f.push_back(int_field("pipeline.full_frame_period", [](auto& c) -> auto& { return c.pipeline.full_frame_period; }));
    f.push_back(int_field("pipeline.full_frame_width", [](auto& c) -> auto& { return c.pipeline.full_frame_width; }));
    f.push_back(int_field("pipeline.full_frame_height", [](auto& c) -> auto& { return c.pipeline.full_frame_height; }));
    f.push_back(double_field("pipeline.nms_iou", [](auto& c) -> auto& { return c.pipeline.nms_iou; }));
    f.push_back(double_field("pipeline.coverage_threshold", [](auto& c) -> auto& { return c.pipeline.coverage_threshold; }));
    f.push_back(bool_field("pipeline.crops_on_refresh", [](auto& c) -> auto& { return c.pipeline.crops_on_refresh; }));
    f.push_back(bool_field("pipeline.full_frame_only", [](auto& c) -> auto& { return c.pipeline.full_frame_only; }));
    f.push_back(bool_field("pipeline.temporal_filtering", [](auto& c) -> auto& { return c.pipeline.temporal_filtering; }));
    f.push_back(bool_field("pipeline.parallel_dispatch", [](auto& c) -> auto& { return c.pipeline.parallel_dispatch; }));
    add_tier(f, "large", &PipelineConfig::large_tier);
    add_tier(f, "small", &PipelineConfig::small_tier);

    f.push_back(double_field("temporal.conf_genuine", [](auto& c) -> auto& { return c.pipeline.temporal.conf_genuine; }));
    f.push_back(double_field("temporal.conf_floor", [](auto& c) -> auto& { return c.pipeline.temporal.conf_floor; }));
    f.push_back(double_field("temporal.overlap_min", [](auto& c) -> auto& { return c.pipeline.temporal.overlap_min; }));

    f.push_back(double_field("oracle.min_visible_height", [](auto& c) -> auto& { return c.oracle.min_visible_height; }));
    f.push_back(double_field("oracle.jitter_fraction", [](auto& c) -> auto& { return c.oracle.jitter_fraction; }));
    f.push_back(double_field("oracle.base_confidence", [](auto& c) -> auto& { return c.oracle.base_confidence; }));
    f.push_back(double_field("oracle.flicker_prob", [](auto& c) -> auto& { return c.oracle.flicker_prob; }));
    f.push_back(double_field("oracle.degraded_confidence", [](auto& c) -> auto& { return c.oracle.degraded_confidence; }));
    f.push_back(double_field("oracle.min_region_overlap", [](auto& c) -> auto& { return c.oracle.min_region_overlap; }));

    f.push_back(double_field("eval.iou_threshold", [](auto& c) -> auto& { return c.eval.iou_threshold; }));
    f.push_back({"eval.interpolation",
                 [](RunConfig& c, std::string_view v) {
                   if (v == "all_point") {
                     c.eval.interpolation = ApInterpolation::all_point;
                   } else if (v == "eleven_point") {
                     c.eval.interpolation = ApInterpolation::eleven_point;
                   } else {
                     bad_value("eval.interpolation", v);
                   }
                 },
                 [](const RunConfig& c) {
                   return std::string(c.eval.interpolation == ApInterpolation::all_point
                                          ? "all_point"
                                          : "eleven_point");
                 }});
    return f;
  }();
  return table;
}

}  // namespace

void RunConfig::validate() const {
  if (!dims.valid()) throw std::invalid_argument("config: frame size must be positive");
  if (detector == DetectorKind::external && external_command.empty())
    throw std::invalid_argument("config: external detector needs external_command");
  if (external_timeout_ms < 1) throw std::invalid_argument("config: external_timeout_ms must be >= 1");
  if (parallel_sequences < 1) throw std::invalid_argument("config: parallel_sequences must be >= 1");
  if (!(eval.iou_threshold > 0.0 && eval.iou_threshold <= 1.0))
    throw std::invalid_argument("config: eval.iou_threshold must be in (0, 1]");
  pipeline.validate();
  oracle.validate();
}

void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& f : fields()) {
    if (f.key == key) {
      f.set(cfg, text::trim(value));
      if (key == "seed") cfg.oracle.rng_seed = cfg.seed;
      return;
    }
  }
  throw std::invalid_argument("config: unknown key '" + key + "'");
}

void apply_config_text(RunConfig& cfg, const std::string& content) {
  std::istringstream in(content);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = line;
    if (auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    body = text::trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    try {
      set_config_value(cfg, std::string(text::trim(body.substr(0, eq))),
                       std::string(text::trim(body.substr(eq + 1))));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  apply_config_text(cfg, buf.str());
}

std::string echo_config(const RunConfig& cfg) {
  std::string out;
  for (const auto& f : fields()) out += f.key + " = " + f.get(cfg) + '\n';
  return out;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& f : fields()) keys.push_back(f.key);
  return keys;
}

}  // namespace pedcrop
