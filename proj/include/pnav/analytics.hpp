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
#include <string>
#include <vector>

#include "pnav/panoptic.hpp"
#include "pnav/schema.hpp"

namespace pnav {

struct FrameCounts {
  std::uint64_t frame_id = 0;
  std::uint64_t timestamp_us = 0;
  std::map<ClassId, std::uint32_t> counts;  // thing class -> segments in frame
  friend bool operator==(const FrameCounts&, const FrameCounts&) = default;
};

struct WindowPeak {
  std::uint64_t sum = 0;
  std::uint64_t start_frame_id = 0;
};

struct SequenceDistribution {
  std::size_t window = 1;
  std::vector<FrameCounts> frames;
  std::map<ClassId, std::uint64_t> totals;
  // windowed[class][k] = sum over frames k .. k + window - 1 (stride 1);
  // empty when there are fewer frames than the window.
  std::map<ClassId, std::vector<std::uint64_t>> windowed;
  std::map<ClassId, WindowPeak> peaks;
};

// Counts fused thing segments per class. Stuff is uncountable and excluded.
FrameCounts count_instances(const PanopticMap& map, const LabelSchema& schema, std::uint64_t frame_id = 0,
                            std::uint64_t timestamp_us = 0);

// Throws InvalidArgument for window 0 or frame ids not strictly ascending.
SequenceDistribution aggregate(const std::vector<FrameCounts>& seq, std::size_t window);

// "frame_id,timestamp_us,<thing class names...>" with one row per frame and
// zeros for absent classes; columns follow the schema's thing order.
std::string distribution_csv(const SequenceDistribution& dist, const LabelSchema& schema);
// Totals and windowed peaks keyed by class name.
std::string distribution_json(const SequenceDistribution& dist, const LabelSchema& schema);

}  // namespace pnav
