// Copyright 2026 The Panoptic-Nav Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <fmt/format.h>

#include <atomic>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json_config.hpp"
#include "pnav/depth.hpp"
#include "pnav/error.hpp"
#include "pnav/fusion.hpp"
#include "pnav/live.hpp"
#include "pnav/metrics.hpp"
#include "pnav/pipeline.hpp"
#include "pnav/render.hpp"
#include "pnav/report.hpp"
#include "pnav/resample.hpp"
#include "pnav/schema.hpp"
#include "pnav/sequence.hpp"

namespace pnav::cli {
namespace {

namespace fs = std::filesystem;

std::atomic<bool> g_interrupted{false};

void on_sigint(int) { g_interrupted.store(true); }

struct FusionFlags {
  double confidence_threshold = 0.5;
  double overlap_keep_fraction = 0.5;
  std::uint64_t min_stuff_area = 4096;
  std::uint64_t min_instance_area = 16;
  CLI::Option* min_stuff_opt = nullptr;

  void add(CLI::App* app) {
    app->add_option("--confidence-threshold", confidence_threshold, "Drop instances below this confidence")
        ->check(CLI::Range(0.0, 1.0));
    app->add_option("--overlap-keep-fraction", overlap_keep_fraction,
                    "Keep an instance if at least this fraction of its mask is unclaimed")
        ->check(CLI::Range(0.0, 1.0));
    min_stuff_opt = app->add_option("--min-stuff-area", min_stuff_area,
                                    "Minimum unclaimed stuff area in pixels (default: 4096 scaled from 480x640)");
    app->add_option("--min-instance-area", min_instance_area, "Minimum claimed instance area in pixels");
  }

  FusionConfig config() const {
    FusionConfig c;
    c.confidence_threshold = confidence_threshold;
    c.overlap_keep_fraction = overlap_keep_fraction;
    c.min_stuff_area = min_stuff_area;
    c.min_instance_area = min_instance_area;
    c.scale_stuff_area = min_stuff_opt->count() == 0;
    return c;
  }
};

struct PipelineFlags {
  FusionFlags fusion;
  std::string mode = "lossless";
  double target_rate_fps = 4.0;
  std::size_t analytics_window = 4;
  std::uint64_t stall_us = 0;
  double d_floor_m = 0.3;
  std::size_t max_events_per_frame = 3;
  std::uint64_t repeat_suppression_us = 2'000'000;
  double reapproach_fraction = 0.2;

  void add(CLI::App* app) {
    fusion.add(app);
    app->add_option("--mode", mode, "Frame handling when processing falls behind")
        ->check(CLI::IsMember({"lossless", "latest-wins"}));
    app->add_option("--target-rate-fps", target_rate_fps, "Nominal input rate")->check(CLI::PositiveNumber);
    app->add_option("--analytics-window", analytics_window, "Sliding window for instance counts, in frames")
        ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20));
    app->add_option("--stall-us", stall_us, "Extra processing time injected per frame");
    add_feedback(app);
  }

  void add_feedback(CLI::App* app) {
    app->add_option("--d-floor-m", d_floor_m, "Distance floor for priority scoring")->check(CLI::PositiveNumber);
    app->add_option("--max-events-per-frame", max_events_per_frame, "Feedback events per frame");
    app->add_option("--repeat-suppression-us", repeat_suppression_us, "Repeat suppression window");
    app->add_option("--reapproach-fraction", reapproach_fraction,
                    "Re-announce a suppressed object once it is this much closer")
        ->check(CLI::Range(0.0, 1.0));
  }

  PipelineConfig config() const {
    PipelineConfig c;
    c.mode = mode == "latest-wins" ? DropMode::kLatestWins : DropMode::kLossless;
    c.target_rate_fps = target_rate_fps;
    c.fusion = fusion.config();
    c.analytics_window = analytics_window;
    c.stall_us = stall_us;
    c.feedback.d_floor_m = d_floor_m;
    c.feedback.max_events_per_frame = max_events_per_frame;
    c.feedback.repeat_suppression_us = repeat_suppression_us;
    c.feedback.reapproach_fraction = reapproach_fraction;
    return c;
  }
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  bool verbose = false;
  std::optional<LabelSchema> schema;

  void log(const std::string& msg) const {
    if (verbose) err << msg << "\n";
  }
};

// Thrown for flag combinations CLI11 cannot check on its own.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename T>
T validated(T cfg) {
  try {
    cfg.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

PanopticMap panoptic_of(const Frame& f, const LabelSchema& schema, const FusionConfig& cfg) {
  if (f.panoptic) return *f.panoptic;
  if (!f.semantic || !f.instances) {
    throw InvalidArgument(fmt::format("frame {} has no panoptic plane and cannot be fused (needs semantic and "
                                      "instance planes)",
                                      f.frame_id));
  }
  return fuse_frame(*f.semantic, *f.instances, schema, cfg);
}

// ---- fuse ----

struct FuseCmd {
  std::string input, output;
  FusionFlags fusion;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("fuse", "Merge semantic and instance planes into panoptic planes");
    sub->add_option("-i,--input", input, "Input sequence directory")->required();
    sub->add_option("-o,--output", output, "Output sequence directory")->required();
    fusion.add(sub);
  }

  int run(Context& ctx) const {
    const FusionConfig cfg = validated(fusion.config());
    std::vector<Frame> frames = read_sequence(input);
    for (Frame& f : frames) {
      if (!f.semantic) throw InvalidArgument(fmt::format("frame {} has no semantic plane", f.frame_id));
      if (!f.instances) throw InvalidArgument(fmt::format("frame {} has no instance plane", f.frame_id));
      f.panoptic = fuse_frame(*f.semantic, *f.instances, *ctx.schema, cfg);
      ctx.log(fmt::format("fused frame {}: {} segments", f.frame_id, f.panoptic->segment_index().size()));
    }
    write_sequence(frames, output);
    ctx.out << fmt::format("fused {} frames into {}\n", frames.size(), output);
    return kExitOk;
  }
};

// ---- eval ----

struct EvalCmd {
  std::string pred, gt, json_out, resample_name = "nearest", classes;
  bool percent = false;
  int precision = -1;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("eval", "Score predictions against ground truth (PQ, mIoU, AP)");
    sub->add_option("--pred", pred, "Prediction sequence directory")->required();
    sub->add_option("--gt", gt, "Ground-truth sequence directory (panoptic planes)")->required();
    sub->add_option("--resample", resample_name, "Resampling of predictions whose size differs from the ground truth")
        ->check(CLI::IsMember({"nearest", "bilinear"}));
    sub->add_flag("--percent", percent, "Print scores as percentages");
    sub->add_option("--precision", precision, "Decimals in the text report (default: 4, or 1 with --percent)")
        ->check(CLI::Range(0, 12));
    sub->add_option("--classes", classes, "Comma-separated classes for the per-class IoU columns");
    sub->add_option("--json", json_out, "Also write the JSON report here");
  }

  std::vector<ClassId> highlight(const LabelSchema& schema) const {
    if (classes.empty()) return default_highlight_classes(schema);
    std::vector<ClassId> ids;
    std::stringstream ss(classes);
    std::string name;
    while (std::getline(ss, name, ',')) {
      const ClassDef* c = schema.find_by_name(name);
      if (c == nullptr) throw UsageError(fmt::format("unknown class \"{}\" in --classes", name));
      ids.push_back(c->id);
    }
    return ids;
  }

  int run(Context& ctx) const {
    const LabelSchema& schema = *ctx.schema;
    const Resample mode = *parse_resample(resample_name);
    EvalReport report;
    report.highlight = highlight(schema);
    const std::vector<Frame> preds = read_sequence(pred);
    const std::vector<Frame> gts = read_sequence(gt);
    std::map<std::uint64_t, const Frame*> gt_by_id;
    for (const Frame& g : gts) gt_by_id[g.frame_id] = &g;
    if (preds.size() != gts.size()) {
      throw InvalidArgument(fmt::format("prediction has {} frames, ground truth has {}", preds.size(), gts.size()));
    }
    if (preds.empty()) throw InvalidArgument("no frames to evaluate");

    MatchResult match;
    SemAccumulator sem(schema);
    bool have_instances = true;
    std::vector<std::vector<InstancePrediction>> ap_preds;
    std::vector<std::vector<GtInstance>> ap_gts;
    std::uint32_t image = 0;
    for (const Frame& p : preds) {
      auto it = gt_by_id.find(p.frame_id);
      if (it == gt_by_id.end()) throw InvalidArgument(fmt::format("frame {} has no ground truth", p.frame_id));
      const Frame& g = *it->second;
      if (!g.panoptic) throw InvalidArgument(fmt::format("ground-truth frame {} has no panoptic plane", g.frame_id));
      const int w = g.width, h = g.height;
      const bool scaled = p.width != w || p.height != h;
      PanopticMap pp = panoptic_of(p, schema, FusionConfig::defaults_for(p.width, p.height));
      if (scaled) pp = resample(pp, w, h, mode);
      if (auto bad = check_panoptic(pp, schema)) throw InvalidArgument(fmt::format("frame {}: {}", p.frame_id, *bad));
      if (auto bad = check_panoptic(*g.panoptic, schema)) {
        throw InvalidArgument(fmt::format("ground-truth frame {}: {}", g.frame_id, *bad));
      }
      match.merge(match_segments(pp, *g.panoptic, schema, image));

      if (p.semantic && g.semantic) {
        SemanticMap ps = scaled ? resample(*p.semantic, w, h, mode) : *p.semantic;
        sem.add(ps.ids, g.semantic->ids);
      } else {
        sem.add(pp.class_plane(), g.panoptic->class_plane());
      }

      if (p.instances) {
        std::vector<InstancePrediction> inst = *p.instances;
        if (scaled) {
          for (InstancePrediction& ip : inst) {
            ip.mask = resample(ip.mask, w, h, mode);
            ip.box = bbox_of_mask(ip.mask);
          }
        }
        ap_preds.push_back(std::move(inst));
      } else {
        have_instances = false;
      }
      ap_gts.push_back(gt_instances_from_panoptic(*g.panoptic, schema));
      ++image;
    }
    report.resolution = fmt::format("{}x{}", preds.front().height, preds.front().width);
    report.pq = pq_scores(match);
    report.sem = sem.report();
    if (have_instances) {
      const auto th = default_ap_thresholds();
      report.ap_box = average_precision(ap_preds, ap_gts, schema, IouKind::kBox, th);
      report.ap_mask = average_precision(ap_preds, ap_gts, schema, IouKind::kMask, th);
    }
    ReportFormat fmt_cfg = percent ? ReportFormat::percent() : ReportFormat::fraction();
    if (precision >= 0) fmt_cfg.precision = precision;
    ctx.out << report.to_text(schema, fmt_cfg);
    if (!json_out.empty()) write_text(json_out, report.to_json(schema).dump(2) + "\n");
    return kExitOk;
  }
};

// ---- replay ----

struct ReplayCmd {
  std::string input, output;
  bool no_fused = false;
  PipelineFlags pipeline;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("replay", "Run the perception pipeline over a recorded sequence");
    sub->add_option("-i,--input", input, "Input sequence directory")->required();
    sub->add_option("-o,--output", output, "Directory for events, analytics and timing outputs");
    sub->add_flag("--no-fused", no_fused, "Do not write the fused sequence");
    pipeline.add(sub);
  }

  int run(Context& ctx) const {
    PipelineConfig cfg = validated(pipeline.config());
    cfg.write_fused = !no_fused;
    std::optional<fs::path> out_dir;
    if (!output.empty()) out_dir = output;
    const RunArtifacts art = run_replay(input, cfg, *ctx.schema, out_dir);
    for (const FrameError& e : art.errors) ctx.err << fmt::format("frame {}: {}\n", e.frame_id, e.message);
    ctx.out << fmt::format("processed {} frames, dropped {}, failed {}\n", art.processed_ids.size(), art.drops,
                           art.errors.size());
    ctx.out << art.timing.to_text();
    if (!art.errors.empty()) return kExitData;
    return kExitOk;
  }
};

// ---- serve ----

struct ServeCmd {
  std::string host = "127.0.0.1";
  std::uint16_t port = 7420;
  std::uint64_t heartbeat_ms = 1000;
  std::uint64_t duration_ms = 0;
  PipelineFlags pipeline;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("serve", "Accept framed messages over TCP and stream feedback back");
    sub->add_option("--host", host, "Listen address");
    sub->add_option("--port", port, "Listen port (0 picks a free one)");
    sub->add_option("--heartbeat-ms", heartbeat_ms, "Idle interval between heartbeats")
        ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{3'600'000}));
    sub->add_option("--duration-ms", duration_ms, "Stop after this long (0 = until interrupted)");
    pipeline.add(sub);
  }

  int run(Context& ctx) const {
    PipelineConfig cfg = validated(pipeline.config());
    cfg.write_fused = false;
    LiveOptions opts;
    opts.host = host;
    opts.port = port;
    opts.heartbeat = std::chrono::milliseconds(heartbeat_ms);
    std::ostream& err = ctx.err;
    const bool verbose = ctx.verbose;
    opts.log = [&err, verbose](const std::string& m) {
      if (verbose) err << m << "\n";
    };
    LiveServer server(*ctx.schema, cfg, opts);
    const std::uint16_t bound = server.start();
    ctx.out << fmt::format("listening on {}:{}\n", host, bound) << std::flush;
    g_interrupted.store(false);
    auto previous = std::signal(SIGINT, on_sigint);
    const auto t0 = std::chrono::steady_clock::now();
    while (!g_interrupted.load()) {
      if (duration_ms > 0 && std::chrono::steady_clock::now() - t0 >= std::chrono::milliseconds(duration_ms)) break;
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    std::signal(SIGINT, previous);
    server.stop();
    const LiveStats s = server.stats();
    ctx.out << fmt::format("sessions {}, frames received {}, processed {}, dropped {}, stream errors {}, frame errors {}\n",
                           s.sessions, s.frames_received, s.frames_processed, s.frames_dropped, s.stream_errors,
                           s.frame_errors);
    ctx.out << server.timing().to_text();
    return kExitOk;
  }
};

// ---- analyze ----

struct AnalyzeCmd {
  std::string input, csv_out, json_out;
  std::size_t window = 4;
  FusionFlags fusion;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("analyze", "Per-frame and windowed instance counts of a sequence");
    sub->add_option("-i,--input", input, "Input sequence directory")->required();
    sub->add_option("--analytics-window", window, "Sliding window, in frames")
        ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20));
    sub->add_option("--csv", csv_out, "Write the per-frame CSV here instead of stdout");
    sub->add_option("--json", json_out, "Write the JSON summary here");
    fusion.add(sub);
  }

  int run(Context& ctx) const {
    const FusionConfig cfg = validated(fusion.config());
    const LabelSchema& schema = *ctx.schema;
    std::vector<FrameCounts> counts;
    for (const ManifestEntry& e : read_manifest(input)) {
      const Frame f = load_frame(input, e);
      counts.push_back(count_instances(panoptic_of(f, schema, cfg), schema, f.frame_id, f.timestamp_us));
    }
    const SequenceDistribution dist = aggregate(counts, window);
    const std::string csv = distribution_csv(dist, schema);
    if (csv_out.empty()) {
      ctx.out << csv;
    } else {
      write_text(csv_out, csv);
    }
    if (!json_out.empty()) write_text(json_out, distribution_json(dist, schema));
    for (const auto& [cls, total] : dist.totals) {
      if (total == 0) continue;
      const WindowPeak& p = dist.peaks.at(cls);
      ctx.log(fmt::format("{}: {} total, peak {} in window starting at frame {}", schema.at(cls).name, total, p.sum,
                          p.start_frame_id));
    }
    return kExitOk;
  }
};

// ---- render ----

struct RenderCmd {
  std::string input, output;
  bool no_rgb = false;
  FusionFlags fusion;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("render", "Write PNG overlays with class colors, boundaries and distances");
    sub->add_option("-i,--input", input, "Input sequence directory")->required();
    sub->add_option("-o,--output", output, "Output directory for PNG files")->required();
    sub->add_flag("--no-rgb", no_rgb, "Do not blend the RGB plane under the overlay");
    fusion.add(sub);
  }

  int run(Context& ctx) const {
    const FusionConfig cfg = validated(fusion.config());
    const LabelSchema& schema = *ctx.schema;
    fs::create_directories(output);
    std::size_t n = 0;
    for (const ManifestEntry& e : read_manifest(input)) {
      const Frame f = load_frame(input, e);
      const PanopticMap pan = panoptic_of(f, schema, cfg);
      const auto segments = segment_stats(pan, f.depth ? *f.depth : DepthMap());
      const auto* rgb = (!no_rgb && f.rgb) ? &*f.rgb : nullptr;
      const fs::path file = fs::path(output) / fmt::format("frame_{:06d}.png", f.frame_id);
      write_png(file, render_overlay(pan, schema, segments, rgb));
      ctx.log(fmt::format("wrote {}", file.string()));
      ++n;
    }
    ctx.out << fmt::format("rendered {} frames into {}\n", n, output);
    return kExitOk;
  }
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Panoptic perception toolkit for a wearable navigation assistant", "pnav"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file with flag values (command-line flags take precedence)");

  std::string schema_path;
  bool verbose = false;
  app.add_option("--schema", schema_path, "Label schema JSON (default: built-in 65-class street schema)");
  app.add_flag("-v,--verbose", verbose, "Log progress to stderr");

  FuseCmd fuse;
  EvalCmd eval;
  ReplayCmd replay;
  ServeCmd serve;
  AnalyzeCmd analyze;
  RenderCmd render;
  fuse.add(app);
  eval.add(app);
  replay.add(app);
  serve.add(app);
  analyze.add(app);
  render.add(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  Context ctx{out, err, verbose, std::nullopt};
  try {
    ctx.schema = schema_path.empty() ? default_schema() : load_schema_file(schema_path);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    if (cmd == "fuse") return fuse.run(ctx);
    if (cmd == "eval") return eval.run(ctx);
    if (cmd == "replay") return replay.run(ctx);
    if (cmd == "serve") return serve.run(ctx);
    if (cmd == "analyze") return analyze.run(ctx);
    if (cmd == "render") return render.run(ctx);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace pnav::cli
