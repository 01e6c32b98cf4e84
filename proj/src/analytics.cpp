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

#include "pnav/analytics.hpp"

#include <fmt/format.h>

#include "json.hpp"
#include "pnav/error.hpp"

namespace pnav {

FrameCounts count_instances(const PanopticMap& map, const LabelSchema& schema, std::uint64_t frame_id,
                            std::uint64_t timestamp_us) {
  FrameCounts fc{frame_id, timestamp_us, {}};
  for (const SegmentEntry& e : map.segment_index()) {
    if (schema.is_thing(e.class_id)) ++fc.counts[e.class_id];
  }
  return fc;
}

SequenceDistribution aggregate(const std::vector<FrameCounts>& seq, std::size_t window) {
  if (window == 0) throw InvalidArgument("aggregate: window must be >= 1");
  for (std::size_t i = 1; i < seq.size(); ++i) {
    if (seq[i].frame_id <= seq[i - 1].frame_id) {
      throw InvalidArgument(fmt::format("aggregate: frame {} follows frame {} (ids must ascend)", seq[i].frame_id,
                                        seq[i - 1].frame_id));
    }
  }
  SequenceDistribution d;
  d.window = window;
  d.frames = seq;
  for (const FrameCounts& f : seq) {
    for (const auto& [cls, n] : f.counts) d.totals[cls] += n;
  }
  if (seq.size() < window) return d;
  const std::size_t n_windows = seq.size() - window + 1;
  for (const auto& [cls, total] : d.totals) {
    auto count_at = [&](std::size_t i) -> std::uint64_t {
      auto it = seq[i].counts.find(cls);
      return it == seq[i].counts.end() ? 0 : it->second;
    };
    std::vector<std::uint64_t>& w = d.windowed[cls];
    w.reserve(n_windows);
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < window; ++i) sum += count_at(i);
    w.push_back(sum);
    for (std::size_t k = 1; k < n_windows; ++k) {
      sum = sum + count_at(k + window - 1) - count_at(k - 1);
      w.push_back(sum);
    }
    WindowPeak peak{w[0], seq[0].frame_id};
    for (std::size_t k = 1; k < w.size(); ++k) {
      if (w[k] > peak.sum) peak = {w[k], seq[k].frame_id};
    }
    d.peaks[cls] = peak;
  }
  return d;
}

std::string distribution_csv(const SequenceDistribution& dist, const LabelSchema& schema) {
  const auto things = schema.thing_ids();
  std::string out = "frame_id,timestamp_us";
  for (ClassId id : things) out += "," + schema.at(id).name;
  out += "\n";
  for (const FrameCounts& f : dist.frames) {
    out += fmt::format("{},{}", f.frame_id, f.timestamp_us);
    for (ClassId id : things) {
      auto it = f.counts.find(id);
      out += fmt::format(",{}", it == f.counts.end() ? 0u : it->second);
    }
    out += "\n";
  }
  return out;
}

std::string distribution_json(const SequenceDistribution& dist, const LabelSchema& schema) {
  nlohmann::ordered_json doc;
  doc["frames"] = dist.frames.size();
  doc["window"] = dist.window;
  auto& totals = doc["totals"] = nlohmann::ordered_json::object();
  for (const auto& [cls, n] : dist.totals) totals[schema.at(cls).name] = n;
  auto& peaks = doc["windowed_peaks"] = nlohmann::ordered_json::object();
  for (const auto& [cls, p] : dist.peaks) {
    peaks[schema.at(cls).name] = {{"sum", p.sum}, {"start_frame_id", p.start_frame_id}};
  }
  return doc.dump(2) + "\n";
}

}  // namespace pnav
