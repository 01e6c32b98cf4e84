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

#include "doctest.h"
#include "oracles/oracles.hpp"
#include "pnav/pipeline.hpp"
#include "pnav/sequence.hpp"
#include "pnav/synth.hpp"
#include "support/testkit.hpp"

using namespace pnav;

namespace {

std::filesystem::path make_walk(const testkit::TempDir& dir, std::size_t frames) {
  WalkConfig wc;
  wc.width = 64;
  wc.height = 48;
  wc.frames = frames;
  write_sequence(synthesize_walk(wc, default_schema()), dir.path() / "seq");
  return dir.path() / "seq";
}

std::string slurp(const std::filesystem::path& p) {
  const auto b = read_file(p);
  return {b.begin(), b.end()};
}

}  // namespace

TEST_CASE("lossless replay processes every frame") {
  testkit::TempDir dir("pipe_lossless");
  const auto seq = make_walk(dir, 10);
  const auto frames = read_sequence(seq);
  const RunArtifacts out = run_replay(seq, PipelineConfig{}, default_schema(), dir.path() / "out");

  CHECK(out.drops == 0);
  CHECK(out.errors.empty());
  REQUIRE(out.fused.size() == 10);
  REQUIRE(out.processed_ids.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(out.processed_ids[i] == frames[i].frame_id);
    const auto cfg = FusionConfig::defaults_for(frames[i].width, frames[i].height);
    CHECK(*out.fused[i].panoptic ==
          oracle::fuse(*frames[i].semantic, *frames[i].instances, default_schema(), cfg));
  }
  // header plus one row per frame
  CHECK(std::count(out.analytics_csv.begin(), out.analytics_csv.end(), '\n') == 11);
  CHECK(out.timing.frames_processed == 10);
  for (const char* f : {"events.jsonl", "analytics.csv", "analytics.json", "timing.txt", "timing.json",
                        "errors.jsonl", "fused/manifest.json"}) {
    CHECK(std::filesystem::exists(dir.path() / "out" / f));
  }
  CHECK(read_sequence(dir.path() / "out" / "fused").size() == 10);
}

TEST_CASE("replay outputs are deterministic") {
  testkit::TempDir dir("pipe_det");
  const auto seq = make_walk(dir, 12);
  run_replay(seq, PipelineConfig{}, default_schema(), dir.path() / "a");
  run_replay(seq, PipelineConfig{}, default_schema(), dir.path() / "b");
  for (const char* f : {"events.jsonl", "analytics.csv", "analytics.json"}) {
    CHECK(slurp(dir.path() / "a" / f) == slurp(dir.path() / "b" / f));
  }
  for (const auto& e : read_manifest(dir.path() / "a" / "fused")) {
    CHECK(read_file(dir.path() / "a" / "fused" / e.blob) == read_file(dir.path() / "b" / "fused" / e.blob));
  }
}

TEST_CASE("latest-wins replay drops what the queue model drops") {
  testkit::TempDir dir("pipe_lw");
  const auto seq = make_walk(dir, 20);
  PipelineConfig cfg;
  cfg.mode = DropMode::kLatestWins;
  cfg.stall_us = 1'000'000;
  const RunArtifacts out = run_replay(seq, cfg, default_schema(), std::nullopt);

  std::vector<std::int64_t> arrivals;
  for (int i = 0; i < 20; ++i) arrivals.push_back(i * 250'000);
  const auto want = oracle::latest_wins(arrivals, 1'000'000);
  CHECK(out.drops == want.dropped.size());
  REQUIRE(out.processed_ids.size() == want.processed.size());
  const auto frames = read_manifest(seq);
  for (std::size_t k = 0; k < want.processed.size(); ++k) {
    CHECK(out.processed_ids[k] == frames[want.processed[k]].frame_id);
  }
  CHECK(out.processed_ids.back() == frames.back().frame_id);
  CHECK(out.drops > 0);
  // queueing delay plus the stall shows up in end-to-end latency
  CHECK(out.timing.end_to_end.max_us >= 1'000'000);
}

TEST_CASE("latest-wins plan matches the tick simulation") {
  testkit::Rng rng(23);
  for (int c = 0; c < 300; ++c) {
    std::vector<std::int64_t> arrivals;
    std::int64_t t = 0;
    const int n = rng.range(0, 25);
    for (int i = 0; i < n; ++i) {
      t += rng.range(0, 40);
      arrivals.push_back(t);
    }
    const auto service = static_cast<std::uint64_t>(rng.range(0, 60));
    const auto plan = plan_latest_wins(arrivals, service);
    const auto want = oracle::latest_wins(arrivals, static_cast<std::int64_t>(service));
    CHECK(plan.processed == want.processed);
    CHECK(plan.dropped == want.dropped);
    CHECK(plan.processed.size() + plan.dropped.size() == arrivals.size());
  }
}

TEST_CASE("latest-wins boundary: arrival exactly at completion") {
  // frame 0 busy [0,10); frame 1 waits; frame 2 arrives at 10 when frame 1 has just started
  const std::vector<std::int64_t> arrivals{0, 5, 10};
  const auto plan = plan_latest_wins(arrivals, 10);
  CHECK(plan.processed == std::vector<std::size_t>{0, 1, 2});
  CHECK(plan.start_us == std::vector<std::int64_t>{0, 10, 20});
  CHECK(plan.dropped.empty());
}

TEST_CASE("frames missing a plane are recorded and skipped") {
  testkit::TempDir dir("pipe_err");
  WalkConfig wc;
  wc.width = 32;
  wc.height = 24;
  wc.frames = 4;
  auto frames = synthesize_walk(wc, default_schema());
  frames[2].instances.reset();
  write_sequence(frames, dir.path() / "seq");
  const RunArtifacts out = run_replay(dir.path() / "seq", PipelineConfig{}, default_schema(), std::nullopt);
  REQUIRE(out.errors.size() == 1);
  CHECK(out.errors[0].frame_id == frames[2].frame_id);
  CHECK(out.errors[0].message.find("instance plane") != std::string::npos);
  CHECK(out.processed_ids.size() == 3);
  CHECK(out.timing.frames_failed == 1);
}

TEST_CASE("timing report invariants") {
  testkit::TempDir dir("pipe_timing");
  const auto seq = make_walk(dir, 8);
  const RunArtifacts out = run_replay(seq, PipelineConfig{}, default_schema(), std::nullopt);
  REQUIRE(out.timing.stages.size() == pipeline_stages().size());
  std::uint64_t max_stage = 0;
  for (const StageStats& s : out.timing.stages) {
    CHECK(s.count == 8);
    CHECK(s.p50_us <= s.p95_us);
    CHECK(s.p95_us <= s.max_us);
    max_stage = std::max(max_stage, s.max_us);
  }
  CHECK(out.timing.end_to_end.max_us >= max_stage);
  for (const FrameTiming& t : out.frame_timings) {
    std::uint64_t sum = 0;
    for (const auto& [_, us] : t.stage_us) sum += us;
    CHECK(t.end_to_end_us >= sum);
  }
}

TEST_CASE("config validation") {
  PipelineConfig cfg;
  cfg.target_rate_fps = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.analytics_window = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}
