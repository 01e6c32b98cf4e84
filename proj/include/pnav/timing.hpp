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

#include <chrono>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace pnav {

struct StageStats {
  std::string name;
  std::size_t count = 0;
  std::uint64_t p50_us = 0;
  std::uint64_t p95_us = 0;
  std::uint64_t max_us = 0;
};

// Nearest-rank percentile of an unsorted sample (0 for an empty one).
std::uint64_t percentile_us(std::vector<std::uint64_t> samples, double p);

struct FrameTiming {
  std::uint64_t frame_id = 0;
  std::map<std::string, std::uint64_t> stage_us;
  std::uint64_t end_to_end_us = 0;
};

struct TimingReport {
  std::vector<StageStats> stages;
  StageStats end_to_end;
  std::uint64_t frames_processed = 0;
  std::uint64_t frames_dropped = 0;
  std::uint64_t frames_failed = 0;

  std::string to_text() const;
  std::string to_json() const;
};

// Collects per-frame stage latencies; single owner.
class LatencyRecorder {
 public:
  explicit LatencyRecorder(std::vector<std::string> stage_order) : order_(std::move(stage_order)) {}

  void add(const FrameTiming& t) { frames_.push_back(t); }
  void merge(const LatencyRecorder& other) {
    frames_.insert(frames_.end(), other.frames_.begin(), other.frames_.end());
  }
  const std::vector<FrameTiming>& frames() const { return frames_; }

  TimingReport report(std::uint64_t dropped, std::uint64_t failed) const;

 private:
  std::vector<std::string> order_;
  std::vector<FrameTiming> frames_;
};

inline std::uint64_t elapsed_us(std::chrono::steady_clock::time_point since) {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - since).count());
}

}  // namespace pnav
