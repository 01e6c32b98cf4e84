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

#include "pnav/timing.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace pnav {

std::uint64_t percentile_us(std::vector<std::uint64_t> samples, double p) {
  if (samples.empty()) return 0;
  std::sort(samples.begin(), samples.end());
  const auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(samples.size())));
  return samples[std::clamp<std::size_t>(rank, 1, samples.size()) - 1];
}

namespace {

StageStats stats_of(std::string name, const std::vector<std::uint64_t>& v) {
  StageStats s;
  s.name = std::move(name);
  s.count = v.size();
  s.p50_us = percentile_us(v, 0.50);
  s.p95_us = percentile_us(v, 0.95);
  s.max_us = v.empty() ? 0 : *std::max_element(v.begin(), v.end());
  return s;
}

}  // namespace

TimingReport LatencyRecorder::report(std::uint64_t dropped, std::uint64_t failed) const {
  TimingReport r;
  for (const std::string& stage : order_) {
    std::vector<std::uint64_t> v;
    for (const FrameTiming& f : frames_) {
      auto it = f.stage_us.find(stage);
      if (it != f.stage_us.end()) v.push_back(it->second);
    }
    r.stages.push_back(stats_of(stage, v));
  }
  std::vector<std::uint64_t> e2e;
  for (const FrameTiming& f : frames_) e2e.push_back(f.end_to_end_us);
  r.end_to_end = stats_of("end-to-end", e2e);
  r.frames_processed = frames_.size();
  r.frames_dropped = dropped;
  r.frames_failed = failed;
  return r;
}

std::string TimingReport::to_text() const {
  std::string out = fmt::format("{:<12} {:>7} {:>10} {:>10} {:>10}\n", "stage", "count", "p50_us", "p95_us", "max_us");
  auto row = [&](const StageStats& s) {
    out += fmt::format("{:<12} {:>7} {:>10} {:>10} {:>10}\n", s.name, s.count, s.p50_us, s.p95_us, s.max_us);
  };
  for (const StageStats& s : stages) row(s);
  row(end_to_end);
  out += fmt::format("processed {}  dropped {}  failed {}\n", frames_processed, frames_dropped, frames_failed);
  return out;
}

std::string TimingReport::to_json() const {
  nlohmann::ordered_json doc;
  auto stage_json = [](const StageStats& s) {
    return nlohmann::ordered_json{
        {"stage", s.name}, {"count", s.count}, {"p50_us", s.p50_us}, {"p95_us", s.p95_us}, {"max_us", s.max_us}};
  };
  doc["stages"] = nlohmann::ordered_json::array();
  for (const StageStats& s : stages) doc["stages"].push_back(stage_json(s));
  doc["end_to_end"] = stage_json(end_to_end);
  doc["frames_processed"] = frames_processed;
  doc["frames_dropped"] = frames_dropped;
  doc["frames_failed"] = frames_failed;
  return doc.dump(2) + "\n";
}

}  // namespace pnav
