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

#include <optional>
#include <string_view>
#include <vector>

#include "pnav/panoptic.hpp"
#include "pnav/schema.hpp"

namespace pnav {

enum class Sector { kLeft = 0, kCenter = 1, kRight = 2 };

std::string_view sector_name(Sector s);
std::optional<Sector> parse_sector(std::string_view name);

struct SegmentInfo {
  InstanceId instance_id = 0;
  ClassId class_id = 0;
  std::uint64_t area = 0;
  double centroid_row = 0.0;
  double centroid_col = 0.0;
  std::optional<std::uint16_t> distance_mm;  // median of valid depths
  double valid_depth_fraction = 0.0;
  Sector sector = Sector::kCenter;
  friend bool operator==(const SegmentInfo&, const SegmentInfo&) = default;
};

// col < W/3 -> left, col < 2W/3 -> center, else right.
Sector sectorize(double centroid_col, int width);

// One entry per segment (thing: per instance; stuff and void: per class),
// ascending by packed label. Distance is the lower median of nonzero depths.
// An empty depth map means "no depth" (all distances undefined).
std::vector<SegmentInfo> segment_stats(const PanopticMap& map, const DepthMap& depth);

// Thing segments with a distance, nearest first (ties: larger area, then
// lower instance id), followed by thing segments without one by instance id.
std::vector<SegmentInfo> nearest_things(const std::vector<SegmentInfo>& segments, const LabelSchema& schema);

}  // namespace pnav
