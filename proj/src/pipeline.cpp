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

#include "pnav/pipeline.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <thread>

#include "json.hpp"
#include "pnav/channel.hpp"
#include "pnav/error.hpp"
#include "pnav/sequence.hpp"

namespace pnav {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

void PipelineConfig::validate() const {
  if (!(target_rate_fps > 0.0)) throw InvalidArgument(fmt::format("target rate {} fps must be > 0", target_rate_fps));
  if (analytics_window == 0) throw InvalidArgument("analytics window must be >= 1");
  if (fusion) fusion->validate();
  feedback.validate();
}

FrameProcessor::FrameProcessor(const LabelSchema& schema, PipelineConfig config)
    : schema_(&schema), config_(std::move(config)), scheduler_(config_.feedback) {
  config_.validate();
}

PanopticMap FrameProcessor::fuse(const Frame& frame, FrameTiming* timing) const {
  if (!frame.semantic) throw InvalidArgument(fmt::format("frame {} has no semantic plane", frame.frame_id));
  if (!frame.instances) throw InvalidArgument(fmt::format("frame {} has no instance plane", frame.frame_id));
  const auto t0 = Clock::now();
  const FusionConfig cfg = config_.fusion ? *config_.fusion : FusionConfig::defaults_for(frame.width, frame.height);
  PanopticMap pan = fuse_frame(*frame.semantic, *frame.instances, *schema_, cfg);
  if (timing) timing->stage_us["fusion"] = elapsed_us(t0);
  return pan;
}

FrameResult FrameProcessor::describe(const Frame& frame, PanopticMap panoptic, FrameTiming* timing) {
  FrameResult r;
  r.frame_id = frame.frame_id;
  r.timestamp_us = frame.timestamp_us;
  auto t0 = Clock::now();
  r.segments = segment_stats(panoptic, frame.depth ? *frame.depth : DepthMap());
  if (timing) timing->stage_us["depth"] = elapsed_us(t0);

  t0 = Clock::now();
  auto candidates = score_segments(r.segments, *schema_, config_.feedback, frame.frame_id);
  r.events = scheduler_.schedule(frame.frame_id, frame.timestamp_us, std::move(candidates));
  if (timing) timing->stage_us["feedback"] = elapsed_us(t0);

  t0 = Clock::now();
  r.counts = count_instances(panoptic, *schema_, frame.frame_id, frame.timestamp_us);
  if (timing) timing->stage_us["analytics"] = elapsed_us(t0);
  r.panoptic = std::move(panoptic);
  return r;
}

FrameResult FrameProcessor::process(const Frame& frame, FrameTiming* timing) {
  return describe(frame, fuse(frame, timing), timing);
}

LatestWinsPlan plan_latest_wins(std::span<const std::int64_t> arrivals_us, std::uint64_t service_us) {
  LatestWinsPlan plan;
  const auto service = static_cast<std::int64_t>(service_us);
  std::int64_t free_at = std::numeric_limits<std::int64_t>::min();
  std::optional<std::size_t> waiting;
  auto start = [&](std::size_t idx, std::int64_t at) {
    plan.processed.push_back(idx);
    plan.start_us.push_back(at);
    free_at = at + service;
  };
  for (std::size_t i = 0; i < arrivals_us.size(); ++i) {
    const std::int64_t t = arrivals_us[i];
    if (waiting && free_at <= t) {
      start(*waiting, free_at);
      waiting.reset();
    }
    if (free_at <= t) {
      start(i, t);
    } else {
      if (waiting) plan.dropped.push_back(*waiting);
      waiting = i;
    }
  }
  if (waiting) start(*waiting, free_at);
  return plan;
}

namespace {

struct Work {
  std::size_t index = 0;
  std::uint64_t frame_id = 0;
  Clock::time_point started;
  FrameTiming timing;
  std::optional<Frame> frame;
  std::optional<PanopticMap> panoptic;
  std::string error;
};

class Sinks {
 public:
  Sinks(const LabelSchema& schema, const PipelineConfig& cfg, RunArtifacts& out)
      : schema_(schema), cfg_(cfg), out_(out), recorder_(pipeline_stages()) {}

  void accept(Work& w, FrameResult& r, std::uint64_t extra_e2e_us) {
    out_.processed_ids.push_back(r.frame_id);
    out_.event_log += events_to_jsonl(r.events);
    counts_.push_back(r.counts);
    if (cfg_.write_fused) {
      Frame fused = std::move(*w.frame);
      fused.panoptic = std::move(r.panoptic);
      out_.fused.push_back(std::move(fused));
    }
    w.timing.frame_id = r.frame_id;
    w.timing.end_to_end_us = elapsed_us(w.started) + extra_e2e_us;
    recorder_.add(w.timing);
  }

  void fail(const Work& w) { out_.errors.push_back({w.frame_id, w.error}); }

  void finish(std::uint64_t drops) {
    const SequenceDistribution dist = aggregate(counts_, cfg_.analytics_window);
    out_.analytics_csv = distribution_csv(dist, schema_);
    out_.analytics_json = distribution_json(dist, schema_);
    out_.drops = drops;
    out_.timing = recorder_.report(drops, out_.errors.size());
    out_.frame_timings = recorder_.frames();
  }

 private:
  const LabelSchema& schema_;
  const PipelineConfig& cfg_;
  RunArtifacts& out_;
  LatencyRecorder recorder_;
  std::vector<FrameCounts> counts_;
};

void ingest(const fs::path& seq, const ManifestEntry& entry, Work& w) {
  w.frame_id = entry.frame_id;
  w.started = Clock::now();
  try {
    w.frame = load_frame(seq, entry);
  } catch (const Error& e) {
    w.error = e.what();
  }
  w.timing.stage_us["ingest"] = elapsed_us(w.started);
}

void fuse_stage(const FrameProcessor& proc, Work& w) {
  if (!w.error.empty()) return;
  try {
    w.panoptic = proc.fuse(*w.frame, &w.timing);
  } catch (const Error& e) {
    w.error = e.what();
  }
}

void describe_stage(FrameProcessor& proc, Work& w, Sinks& sinks, std::uint64_t extra_e2e_us) {
  if (!w.error.empty()) {
    sinks.fail(w);
    return;
  }
  try {
    FrameResult r = proc.describe(*w.frame, std::move(*w.panoptic), &w.timing);
    sinks.accept(w, r, extra_e2e_us);
  } catch (const Error& e) {
    w.error = e.what();
    sinks.fail(w);
  }
}

void run_lossless(const fs::path& seq, const std::vector<ManifestEntry>& entries, FrameProcessor& proc,
                  Sinks& sinks) {
  BoundedQueue<Work> ingested(4);
  BoundedQueue<Work> fused(4);
  std::thread reader([&] {
    for (std::size_t i = 0; i < entries.size(); ++i) {
      Work w;
      w.index = i;
      ingest(seq, entries[i], w);
      if (!ingested.push(std::move(w))) break;
    }
    ingested.close();
  });
  std::thread fuser([&] {
    while (auto w = ingested.pop()) {
      fuse_stage(proc, *w);
      if (!fused.push(std::move(*w))) break;
    }
    fused.close();
  });
  while (auto w = fused.pop()) describe_stage(proc, *w, sinks, 0);
  reader.join();
  fuser.join();
}

std::uint64_t run_latest_wins(const fs::path& seq, const std::vector<ManifestEntry>& entries, FrameProcessor& proc,
                              Sinks& sinks) {
  const double period_us = 1e6 / proc.config().target_rate_fps;
  std::vector<std::int64_t> arrivals(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    arrivals[i] = static_cast<std::int64_t>(std::llround(static_cast<double>(i) * period_us));
  }
  const LatestWinsPlan plan = plan_latest_wins(arrivals, proc.config().stall_us);
  for (std::size_t k = 0; k < plan.processed.size(); ++k) {
    const std::size_t i = plan.processed[k];
    Work w;
    w.index = i;
    ingest(seq, entries[i], w);
    fuse_stage(proc, w);
    const auto waited = static_cast<std::uint64_t>(plan.start_us[k] - arrivals[i]);
    describe_stage(proc, w, sinks, waited + proc.config().stall_us);
  }
  return plan.dropped.size();
}

std::string errors_jsonl(const std::vector<FrameError>& errors) {
  std::string out;
  for (const FrameError& e : errors) {
    nlohmann::ordered_json j;
    j["frame_id"] = e.frame_id;
    j["error"] = e.message;
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace

RunArtifacts run_replay(const fs::path& sequence, const PipelineConfig& config, const LabelSchema& schema,
                        const std::optional<fs::path>& out_dir) {
  config.validate();
  const std::vector<ManifestEntry> entries = read_manifest(sequence);
  RunArtifacts out;
  FrameProcessor proc(schema, config);
  Sinks sinks(schema, config, out);
  std::uint64_t drops = 0;
  if (config.mode == DropMode::kLossless) {
    run_lossless(sequence, entries, proc, sinks);
  } else {
    drops = run_latest_wins(sequence, entries, proc, sinks);
  }
  sinks.finish(drops);

  if (out_dir) {
    fs::create_directories(*out_dir);
    if (config.write_fused) write_sequence(out.fused, *out_dir / "fused");
    write_text(*out_dir / "events.jsonl", out.event_log);
    write_text(*out_dir / "analytics.csv", out.analytics_csv);
    write_text(*out_dir / "analytics.json", out.analytics_json);
    write_text(*out_dir / "timing.txt", out.timing.to_text());
    write_text(*out_dir / "timing.json", out.timing.to_json());
    write_text(*out_dir / "errors.jsonl", errors_jsonl(out.errors));
  }
  return out;
}

}  // namespace pnav
