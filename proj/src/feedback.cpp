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

#include "pnav/feedback.hpp"

#include <fmt/format.h>

#include <algorithm>

#include "json.hpp"
#include "pnav/error.hpp"

namespace pnav {

void FeedbackPolicy::validate() const {
  if (!(d_floor_m > 0.0)) throw InvalidArgument(fmt::format("d_floor {} must be > 0", d_floor_m));
  if (!(reapproach_fraction > 0.0 && reapproach_fraction < 1.0)) {
    throw InvalidArgument(fmt::format("reapproach_fraction {} outside (0, 1)", reapproach_fraction));
  }
}

std::vector<FeedbackEvent> score_segments(const std::vector<SegmentInfo>& segments, const LabelSchema& schema,
                                          const FeedbackPolicy& policy, std::uint64_t frame_id) {
  std::vector<FeedbackEvent> out;
  for (const SegmentInfo& s : segments) {
    const ClassDef* def = schema.find(s.class_id);
    if (def == nullptr || !def->is_thing) continue;
    FeedbackEvent e;
    e.frame_id = frame_id;
    e.class_id = s.class_id;
    e.sector = s.sector;
    e.distance_mm = s.distance_mm;
    const double d = s.distance_mm ? std::max(*s.distance_mm / 1000.0, policy.d_floor_m) : kUnknownDistanceM;
    e.priority = def->weight / d;
    out.push_back(e);
  }
  return out;
}

bool event_precedes(const FeedbackEvent& a, const FeedbackEvent& b) {
  if (a.priority != b.priority) return a.priority > b.priority;
  if (a.class_id != b.class_id) return a.class_id < b.class_id;
  return static_cast<int>(a.sector) < static_cast<int>(b.sector);
}

FeedbackScheduler::FeedbackScheduler(FeedbackPolicy policy, SchedulerMemory memory)
    : policy_(policy), memory_(std::move(memory)) {
  policy_.validate();
}

std::vector<FeedbackEvent> FeedbackScheduler::schedule(std::uint64_t frame_id, std::uint64_t timestamp_us,
                                                       std::vector<FeedbackEvent> candidates) {
  if (memory_.last_frame_us && timestamp_us < *memory_.last_frame_us) {
    throw InvalidArgument(fmt::format("feedback scheduler: timestamp {} us precedes previous frame at {} us",
                                      timestamp_us, *memory_.last_frame_us));
  }
  memory_.last_frame_us = timestamp_us;
  std::stable_sort(candidates.begin(), candidates.end(), event_precedes);
  if (candidates.size() > policy_.max_events_per_frame) candidates.resize(policy_.max_events_per_frame);

  std::vector<FeedbackEvent> emitted;
  for (FeedbackEvent& e : candidates) {
    const auto key = std::make_pair(e.class_id, e.sector);
    auto it = memory_.emitted.find(key);
    if (it != memory_.emitted.end() && timestamp_us - it->second.at_us < policy_.repeat_suppression_us) {
      const auto& last = it->second;
      const bool closer = e.distance_mm && last.distance_mm &&
                          static_cast<double>(*last.distance_mm) - static_cast<double>(*e.distance_mm) >
                              policy_.reapproach_fraction * static_cast<double>(*last.distance_mm);
      if (!closer) continue;
    }
    e.frame_id = frame_id;
    e.emitted_at_us = timestamp_us;
    memory_.emitted[key] = {timestamp_us, e.distance_mm};
    emitted.push_back(e);
  }
  return emitted;
}

std::string event_to_json(const FeedbackEvent& e) {
  nlohmann::ordered_json j;
  j["frame_id"] = e.frame_id;
  j["class_id"] = e.class_id;
  j["sector"] = sector_name(e.sector);
  if (e.distance_mm) {
    j["distance_mm"] = *e.distance_mm;
  } else {
    j["distance_mm"] = nullptr;
  }
  j["priority"] = e.priority;
  j["emitted_at_us"] = e.emitted_at_us;
  return j.dump();
}

FeedbackEvent event_from_json(std::string_view line) {
  try {
    const auto j = nlohmann::json::parse(line);
    FeedbackEvent e;
    e.frame_id = j.at("frame_id").get<std::uint64_t>();
    e.class_id = j.at("class_id").get<ClassId>();
    const auto sector = parse_sector(j.at("sector").get<std::string>());
    if (!sector) throw InvalidArgument("unknown sector");
    e.sector = *sector;
    if (!j.at("distance_mm").is_null()) e.distance_mm = j.at("distance_mm").get<std::uint16_t>();
    e.priority = j.at("priority").get<double>();
    e.emitted_at_us = j.at("emitted_at_us").get<std::uint64_t>();
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw InvalidArgument(fmt::format("bad feedback event line: {}", ex.what()));
  }
}

std::string events_to_jsonl(const std::vector<FeedbackEvent>& events) {
  std::string out;
  for (const FeedbackEvent& e : events) out += event_to_json(e) + "\n";
  return out;
}

std::vector<FeedbackEvent> events_from_jsonl(std::string_view text) {
  std::vector<FeedbackEvent> out;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = text.substr(0, nl);
    if (!line.empty()) out.push_back(event_from_json(line));
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return out;
}

}  // namespace pnav
