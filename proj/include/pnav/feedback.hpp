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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pnav/depth.hpp"
#include "pnav/schema.hpp"

namespace pnav {

// Distance assumed for segments without depth when scoring.
inline constexpr double kUnknownDistanceM = 10.0;

struct FeedbackEvent {
  std::uint64_t frame_id = 0;
  ClassId class_id = 0;
  Sector sector = Sector::kCenter;
  std::optional<std::uint16_t> distance_mm;
  double priority = 0.0;
  std::uint64_t emitted_at_us = 0;
  friend bool operator==(const FeedbackEvent&, const FeedbackEvent&) = default;
};

struct FeedbackPolicy {
  double d_floor_m = 0.3;
  std::size_t max_events_per_frame = 3;
  std::uint64_t repeat_suppression_us = 2'000'000;
  double reapproach_fraction = 0.2;

  void validate() const;  // throws InvalidArgument
};

// priority = weight / max(distance_m, d_floor), or weight / 10 m when the
// distance is unknown. One candidate per thing segment.
std::vector<FeedbackEvent> score_segments(const std::vector<SegmentInfo>& segments, const LabelSchema& schema,
                                          const FeedbackPolicy& policy, std::uint64_t frame_id = 0);

// Priority desc, then class id asc, then left < center < right.
bool event_precedes(const FeedbackEvent& a, const FeedbackEvent& b);

struct SchedulerMemory {
  struct Last {
    std::uint64_t at_us = 0;
    std::optional<std::uint16_t> distance_mm;
    friend bool operator==(const Last&, const Last&) = default;
  };
  std::optional<std::uint64_t> last_frame_us;
  std::map<std::pair<ClassId, Sector>, Last> emitted;
  friend bool operator==(const SchedulerMemory&, const SchedulerMemory&) = default;
};

// Rate limiter over per-frame candidates. The top max_events_per_frame
// candidates are considered; each is suppressed if the same (class, sector)
// was emitted less than repeat_suppression_us ago, unless it came closer by
// more than reapproach_fraction of the last emitted distance. Suppressed
// events leave the memory untouched. Throws InvalidArgument on a timestamp
// older than the previous frame.
class FeedbackScheduler {
 public:
  explicit FeedbackScheduler(FeedbackPolicy policy, SchedulerMemory memory = {});

  std::vector<FeedbackEvent> schedule(std::uint64_t frame_id, std::uint64_t timestamp_us,
                                      std::vector<FeedbackEvent> candidates);

  const SchedulerMemory& memory() const { return memory_; }
  const FeedbackPolicy& policy() const { return policy_; }
  void reset() { memory_ = {}; }

 private:
  FeedbackPolicy policy_;
  SchedulerMemory memory_;
};

// One JSON object per line; key order is fixed.
std::string event_to_json(const FeedbackEvent& e);
FeedbackEvent event_from_json(std::string_view line);
std::string events_to_jsonl(const std::vector<FeedbackEvent>& events);
std::vector<FeedbackEvent> events_from_jsonl(std::string_view text);

}  // namespace pnav
