#include "commands.hpp"

#include <fstream>
#include <future>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "pedcrop/crop_proposal.hpp"
#include "pedcrop/external_detector.hpp"
#include "pedcrop/json_io.hpp"
#include "pedcrop/oracle_detector.hpp"
#include "pedcrop/pipeline.hpp"
#include "pedcrop/synthetic.hpp"
#include "pedcrop/text.hpp"

namespace pedcrop::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

std::unique_ptr<Detector> make_detector(const RunConfig& cfg, const AnnotationSet& truth) {
  if (cfg.detector == DetectorKind::oracle) return std::make_unique<OracleDetector>(truth, cfg.oracle);
  auto channel = std::make_unique<ProcessChannel>(
      cfg.external_command, std::chrono::milliseconds(cfg.external_timeout_ms));
  return std::make_unique<ExternalDetector>(std::move(channel));
}

json summary_json(const SequenceOutcome& s, std::size_t frames) {
  return {{"dataset", s.dataset.string()},
          {"frames", frames},
          {"map", s.report.map},
          {"recall", s.report.recall()},
          {"precision", s.report.precision()},
          {"full_frame_calls", s.full_frame_calls},
          {"crop_calls", s.crop_calls},
          {"mean_pixels_processed", s.throughput.mean_pixels_processed}};
}

/// Keys set by explicit flags, applied after the config file and --set.
struct FlagOverrides {
  std::vector<std::pair<std::string, std::string>> values;

  void add(const CLI::Option* opt, const std::string& key, const std::string& value) {
    if (opt->count() > 0) values.emplace_back(key, value);
  }
};

void add_tier_flags(CLI::App* cmd, const std::string& tier, CropTierConfig& defaults,
                    std::vector<std::function<void(FlagOverrides&)>>& collectors) {
  auto k = std::make_shared<std::size_t>(defaults.k);
  auto w = std::make_shared<double>(defaults.max_width);
  auto h = std::make_shared<double>(defaults.max_height);
  auto* ok = cmd->add_option("--" + tier + "-k", *k, "Max " + tier + " crops");
  auto* ow = cmd->add_option("--" + tier + "-max-width", *w, "Max " + tier + " crop width (px)");
  auto* oh = cmd->add_option("--" + tier + "-max-height", *h, "Max " + tier + " crop height (px)");
  collectors.push_back([=](FlagOverrides& f) {
    f.add(ok, tier + ".k", std::to_string(*k));
    f.add(ow, tier + ".max_width", text::format_double(*w));
    f.add(oh, tier + ".max_height", text::format_double(*h));
  });
}

}  // namespace

SequenceOutcome run_sequence(const RunConfig& cfg, const fs::path& dataset,
                             const fs::path& output_dir) {
  cfg.validate();
  const AnnotationSet truth = load_annotations(dataset, cfg.format, cfg.dims);
  if (truth.frame_count() == 0) throw std::runtime_error("dataset " + dataset.string() + " has no frames");
  auto detector = make_detector(cfg, truth);

  fs::create_directories(output_dir);
  write_file(output_dir / "config.txt", echo_config(cfg));

  const ReplayResult run = replay(truth.frame_count(), truth.dims, *detector, cfg.pipeline);

  SequenceOutcome outcome;
  outcome.dataset = dataset;
  outcome.output_dir = output_dir;
  std::ostringstream frames;
  for (const auto& f : run.frames) {
    frames << frame_result_to_json(f, cfg.emit_timing).dump() << '\n';
    outcome.full_frame_calls += f.full_frame_calls;
    outcome.crop_calls += f.crop_calls;
  }
  write_file(output_dir / "frames.jsonl", frames.str());

  const auto predictions = run.predictions();
  outcome.report = evaluate_map(predictions, truth, cfg.eval);
  outcome.throughput = measure_fps(run.frames.size(), std::max(run.wall_seconds, 1e-12),
                                   run.total_pixels());

  write_file(output_dir / "eval.json", eval_report_to_json(outcome.report).dump(2) + "\n");
  write_file(output_dir / "pr_curve.csv", pr_curve_csv(outcome.report));
  write_file(output_dir / "summary.json", summary_json(outcome, run.frames.size()).dump(2) + "\n");
  write_file(output_dir / "timing.json", throughput_to_json(outcome.throughput).dump(2) + "\n");
  return outcome;
}

int run_command_line(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Crop-based pedestrian detection replay and evaluation", "pedcrop"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "Replay annotated sequences through the pipeline");
  std::string config_path;
  std::vector<std::string> datasets;
  std::vector<std::string> sets;
  std::string format = "visdrone";
  std::string detector = "oracle";
  std::string external_cmd;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  int frame_w = 1920;
  int frame_h = 1080;
  int period = 5;
  double flicker = 0.0;
  double jitter = 0.05;
  int parallel = 1;
  bool full_frame_only = false;
  bool no_temporal = false;
  bool emit_timing = false;
  run_cmd->add_option("--config", config_path, "Flat key = value config file")->check(CLI::ExistingFile);
  auto* o_dataset = run_cmd->add_option("--dataset", datasets, "Annotation file (repeatable)");
  auto* o_format = run_cmd->add_option("--format", format, "visdrone | darklabel");
  auto* o_detector = run_cmd->add_option("--detector", detector, "oracle | external");
  auto* o_ext = run_cmd->add_option("--external-cmd", external_cmd, "Command speaking the DETECT line protocol");
  auto* o_out = run_cmd->add_option("--out", out_dir, "Output directory");
  auto* o_seed = run_cmd->add_option("--seed", seed, "Top-level random seed");
  auto* o_fw = run_cmd->add_option("--frame-width", frame_w, "Frame width in pixels");
  auto* o_fh = run_cmd->add_option("--frame-height", frame_h, "Frame height in pixels");
  auto* o_period = run_cmd->add_option("--period", period, "Full-frame refresh period in frames");
  auto* o_flicker = run_cmd->add_option("--flicker-prob", flicker, "Oracle confidence flicker probability");
  auto* o_jitter = run_cmd->add_option("--jitter", jitter, "Oracle jitter fraction");
  auto* o_parallel = run_cmd->add_option("--parallel-sequences", parallel, "Sequences replayed concurrently");
  auto* o_ffo = run_cmd->add_flag("--full-frame-only", full_frame_only, "Baseline: full frame every frame, no crops");
  auto* o_nt = run_cmd->add_flag("--no-temporal-filter", no_temporal, "Plain confidence threshold");
  auto* o_timing = run_cmd->add_flag("--emit-timing", emit_timing, "Include wall-clock timing in frames.jsonl");
  run_cmd->add_option("--set", sets, "Override any config key: key=value (repeatable)");
  std::vector<std::function<void(FlagOverrides&)>> run_tiers;
  CropTierConfig large_defaults = CropTierConfig::large_default();
  CropTierConfig small_defaults = CropTierConfig::small_default();
  add_tier_flags(run_cmd, "large", large_defaults, run_tiers);
  add_tier_flags(run_cmd, "small", small_defaults, run_tiers);

  // propose
  auto* propose_cmd = app.add_subcommand("propose", "Dump crop proposals for one annotated frame");
  std::string p_annotations;
  std::string p_format = "visdrone";
  std::size_t p_frame = 0;
  int p_fw = 1920;
  int p_fh = 1080;
  std::vector<std::string> p_sets;
  std::string p_out;
  propose_cmd->add_option("--annotations", p_annotations, "Annotation file")->required()->check(CLI::ExistingFile);
  propose_cmd->add_option("--format", p_format, "visdrone | darklabel");
  propose_cmd->add_option("--frame", p_frame, "0-based frame index")->required();
  propose_cmd->add_option("--frame-width", p_fw, "Frame width in pixels");
  propose_cmd->add_option("--frame-height", p_fh, "Frame height in pixels");
  propose_cmd->add_option("--set", p_sets, "Override large.* / small.* / pipeline.coverage_threshold");
  propose_cmd->add_option("--out", p_out, "Write the dump here instead of stdout");
  std::vector<std::function<void(FlagOverrides&)>> propose_tiers;
  add_tier_flags(propose_cmd, "large", large_defaults, propose_tiers);
  add_tier_flags(propose_cmd, "small", small_defaults, propose_tiers);

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a per-frame prediction file");
  std::string e_predictions;
  std::string e_annotations;
  std::string e_format = "visdrone";
  int e_fw = 1920;
  int e_fh = 1080;
  double e_iou = 0.5;
  bool e_eleven = false;
  std::string e_pr;
  eval_cmd->add_option("--predictions", e_predictions, "frames.jsonl from `run`")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--annotations", e_annotations, "Annotation file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--format", e_format, "visdrone | darklabel");
  eval_cmd->add_option("--frame-width", e_fw, "Frame width in pixels");
  eval_cmd->add_option("--frame-height", e_fh, "Frame height in pixels");
  eval_cmd->add_option("--iou", e_iou, "Matching IoU threshold");
  eval_cmd->add_flag("--eleven-point", e_eleven, "11-point interpolated AP");
  eval_cmd->add_option("--pr-csv", e_pr, "Write the PR curve as CSV");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Crop pipeline vs full-frame baseline on a synthetic scene");
  std::uint64_t b_seed = 7;
  std::size_t b_frames = 50;
  std::string b_scene;
  bench_cmd->add_option("--seed", b_seed, "Scene and oracle seed");
  bench_cmd->add_option("--frames", b_frames, "Number of frames");
  bench_cmd->add_option("--write-scene", b_scene, "Also write the scene as VisDrone annotations");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (run_cmd->parsed()) {
      RunConfig cfg;
      if (!config_path.empty()) apply_config_file(cfg, config_path);
      for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
        set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
      }
      FlagOverrides flags;
      if (o_dataset->count() > 0) {
        std::string joined;
        for (const auto& d : datasets) joined += (joined.empty() ? "" : ",") + d;
        flags.values.emplace_back("datasets", joined);
      }
      flags.add(o_format, "format", format);
      flags.add(o_detector, "detector", detector);
      flags.add(o_ext, "external_command", external_cmd);
      flags.add(o_out, "output_dir", out_dir);
      flags.add(o_seed, "seed", std::to_string(seed));
      flags.add(o_fw, "frame_width", std::to_string(frame_w));
      flags.add(o_fh, "frame_height", std::to_string(frame_h));
      flags.add(o_period, "pipeline.full_frame_period", std::to_string(period));
      flags.add(o_flicker, "oracle.flicker_prob", text::format_double(flicker));
      flags.add(o_jitter, "oracle.jitter_fraction", text::format_double(jitter));
      flags.add(o_parallel, "parallel_sequences", std::to_string(parallel));
      if (o_ffo->count() > 0) flags.values.emplace_back("pipeline.full_frame_only", "true");
      if (o_nt->count() > 0) flags.values.emplace_back("pipeline.temporal_filtering", "false");
      if (o_timing->count() > 0) flags.values.emplace_back("emit_timing", "true");
      for (auto& collect : run_tiers) collect(flags);
      for (const auto& [k, v] : flags.values) set_config_value(cfg, k, v);

      if (cfg.datasets.empty()) throw std::invalid_argument("run: no dataset given (--dataset)");
      cfg.validate();

      std::vector<fs::path> outs;
      for (const auto& d : cfg.datasets)
        outs.push_back(cfg.datasets.size() == 1 ? cfg.output_dir : cfg.output_dir / d.stem());

      std::vector<SequenceOutcome> results(cfg.datasets.size());
      if (cfg.parallel_sequences > 1 && cfg.datasets.size() > 1) {
        for (std::size_t start = 0; start < cfg.datasets.size(); start += std::size_t(cfg.parallel_sequences)) {
          std::vector<std::future<SequenceOutcome>> batch;
          const std::size_t end = std::min(cfg.datasets.size(), start + std::size_t(cfg.parallel_sequences));
          for (std::size_t i = start; i < end; ++i)
            batch.push_back(std::async(std::launch::async, [&, i] {
              return run_sequence(cfg, cfg.datasets[i], outs[i]);
            }));
          for (std::size_t i = start; i < end; ++i) results[i] = batch[i - start].get();
        }
      } else {
        for (std::size_t i = 0; i < cfg.datasets.size(); ++i)
          results[i] = run_sequence(cfg, cfg.datasets[i], outs[i]);
      }
      for (const auto& r : results) {
        out << r.dataset.string() << ": mAP " << std::fixed << std::setprecision(4) << r.report.map
            << "  recall " << r.report.recall() << "  FPS " << std::setprecision(1)
            << r.throughput.fps << "  mean px/frame " << std::setprecision(0)
            << r.throughput.mean_pixels_processed << "  -> " << r.output_dir.string() << '\n';
      }
      return 0;
    }

    if (propose_cmd->parsed()) {
      RunConfig cfg;
      cfg.dims = {p_fw, p_fh};
      for (const auto& kv : p_sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
        set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
      }
      FlagOverrides flags;
      for (auto& collect : propose_tiers) collect(flags);
      for (const auto& [k, v] : flags.values) set_config_value(cfg, k, v);
      cfg.validate();

      const AnnotationSet truth =
          load_annotations(p_annotations, parse_annotation_format(p_format), cfg.dims);
      if (p_frame >= truth.frame_count())
        throw std::invalid_argument("propose: frame " + std::to_string(p_frame) +
                                    " not in annotations (" + std::to_string(truth.frame_count()) +
                                    " frames)");
      std::vector<BoundingBox> boxes;
      for (const auto& gt : truth.frames[p_frame])
        if (gt.role == EvalRole::pedestrian) boxes.push_back(gt.box);
      const TwoTierProposal proposal =
          two_tier_proposal(boxes, cfg.pipeline.large_tier, cfg.pipeline.small_tier, cfg.dims,
                            cfg.pipeline.coverage_threshold);
      const std::string dump = crop_dump(p_frame, proposal).dump(2) + "\n";
      if (p_out.empty()) {
        out << dump;
      } else {
        write_file(p_out, dump);
      }
      return 0;
    }

    if (eval_cmd->parsed()) {
      std::ifstream in(e_predictions);
      if (!in) throw std::runtime_error("cannot open " + e_predictions);
      const auto predictions = read_predictions(in);
      const AnnotationSet truth =
          load_annotations(e_annotations, parse_annotation_format(e_format), {e_fw, e_fh});
      EvalOptions options;
      options.iou_threshold = e_iou;
      options.interpolation = e_eleven ? ApInterpolation::eleven_point : ApInterpolation::all_point;
      const EvalReport report = evaluate_map(predictions, truth, options);
      out << eval_report_to_json(report).dump(2) << '\n';
      if (!e_pr.empty()) write_file(e_pr, pr_curve_csv(report));
      return 0;
    }

    if (bench_cmd->parsed()) {
      const AnnotationSet scene = make_scene(small_pedestrian_scene(b_seed, b_frames));
      if (!b_scene.empty()) write_file(b_scene, serialize_annotations(scene, AnnotationFormat::visdrone));
      OracleConfig oracle;
      oracle.rng_seed = b_seed;
      OracleDetector detector(scene, oracle);

      out << std::left << std::setw(18) << "mode" << std::setw(10) << "mAP" << std::setw(10)
          << "recall" << std::setw(12) << "FPS" << "mean px/frame\n";
      for (bool baseline : {false, true}) {
        PipelineConfig cfg;
        cfg.full_frame_only = baseline;
        const ReplayResult run = replay(scene.frame_count(), scene.dims, detector, cfg);
        const EvalReport report = evaluate_map(run.predictions(), scene);
        const Throughput t = measure_fps(run.frames.size(), std::max(run.wall_seconds, 1e-12),
                                         run.total_pixels());
        out << std::left << std::setw(18) << (baseline ? "full-frame-only" : "crops")
            << std::setw(10) << std::fixed << std::setprecision(4) << report.map << std::setw(10)
            << report.recall() << std::setw(12) << std::setprecision(1) << t.fps
            << std::setprecision(0) << t.mean_pixels_processed << '\n';
      }
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace pedcrop::cli
