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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pnav/analytics.hpp"
#include "pnav/depth.hpp"
#include "pnav/feedback.hpp"
#include "pnav/frame.hpp"
#include "pnav/fusion.hpp"
#include "pnav/timing.hpp"

namespace pnav {

enum class DropMode { kLossless, kLatestWins };

struct PipelineConfig {
  DropMode mode = DropMode::kLossless;
  double target_rate_fps = 4.0;
  // Unset: FusionConfig::defaults_for(frame size) per frame.
  std::optional<FusionConfig> fusion;
  FeedbackPolicy feedback;
  std::size_t analytics_window = 4;
  // Artificial service delay of the processing stage. Replay charges it on
  // a virtual clock; live mode sleeps for it.
  std::uint64_t stall_us = 0;
  bool write_fused = true;

  void validate() const;  // throws InvalidArgument
};

inline const std::vector<std::string>& pipeline_stages() {
  static const std::vector<std::string> stages = {"ingest", "fusion", "depth", "feedback", "analytics"};
  return stages;
}

// Result of one frame through fusion, depth stats, feedback and counting.
struct FrameResult {
  std::uint64_t frame_id = 0;
  std::uint64_t timestamp_us = 0;
  PanopticMap panoptic;
  std::vector<SegmentInfo> segments;
  std::vector<FeedbackEvent> events;
  FrameCounts counts;
};

// Stateful per-stream processor (owns the feedback scheduler).
class FrameProcessor {
 public:
  FrameProcessor(const LabelSchema& schema, PipelineConfig config);

  // Throws InvalidArgument if the frame lacks semantic or instance planes.
  PanopticMap fuse(const Frame& frame, FrameTiming* timing = nullptr) const;
  FrameResult describe(const Frame& frame, PanopticMap panoptic, FrameTiming* timing = nullptr);
  FrameResult process(const Frame& frame, FrameTiming* timing = nullptr);

  void reset() { scheduler_.reset(); }
  const LabelSchema& schema() const { return *schema_; }
  const PipelineConfig& config() const { return config_; }

 private:
  const LabelSchema* schema_;
  PipelineConfig config_;
  FeedbackScheduler scheduler_;
};

struct FrameError {
  std::uint64_t frame_id = 0;
  std::string message;
};

struct RunArtifacts {
  std::vector<std::uint64_t> processed_ids;  // ascending
  std::vector<FrameError> errors;
  std::vector<Frame> fused;  // input frames with their panoptic plane set
  std::string event_log;     // JSON lines
  std::string analytics_csv;
  std::string analytics_json;
  TimingReport timing;
  std::vector<FrameTiming> frame_timings;
  std::uint64_t drops = 0;
};

struct LatestWinsPlan {
  std::vector<std::size_t> processed;     // arrival indices, ascending
  std::vector<std::int64_t> start_us;     // service start per processed frame
  std::vector<std::size_t> dropped;       // arrival indices replaced while waiting
};

// Single server with a capacity-1 waiting slot where newer arrivals replace
// the waiting one. A frame arriving exactly when the server frees up finds
// the waiting frame already started.
LatestWinsPlan plan_latest_wins(std::span<const std::int64_t> arrivals_us, std::uint64_t service_us);

// Replays a sequence directory. Outputs are written to `out_dir` when given
// (fused/, events.jsonl, analytics.csv, analytics.json, timing.txt,
// timing.json, errors.jsonl). Frames missing a required plane are recorded
// as errors and skipped.
RunArtifacts run_replay(const std::filesystem::path& sequence, const PipelineConfig& config,
                        const LabelSchema& schema, const std::optional<std::filesystem::path>& out_dir);

}  // namespace pnav
