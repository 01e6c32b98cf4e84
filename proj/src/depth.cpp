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

#include "pnav/depth.hpp"

#include <fmt/format.h>

#include <algorithm>

#include "pnav/error.hpp"
#include "pnav/kernels.hpp"

namespace pnav {

std::string_view sector_name(Sector s) {
  switch (s) {
    case Sector::kLeft:
      return "left";
    case Sector::kCenter:
      return "center";
    case Sector::kRight:
      return "right";
  }
  return "center";
}

std::optional<Sector> parse_sector(std::string_view name) {
  if (name == "left") return Sector::kLeft;
  if (name == "center") return Sector::kCenter;
  if (name == "right") return Sector::kRight;
  return std::nullopt;
}

Sector sectorize(double centroid_col, int width) {
  // Compare 3*col against W and 2W to keep the boundaries exact.
  const double scaled = 3.0 * centroid_col;
  if (scaled < static_cast<double>(width)) return Sector::kLeft;
  if (scaled < 2.0 * static_cast<double>(width)) return Sector::kCenter;
  return Sector::kRight;
}

std::vector<SegmentInfo> segment_stats(const PanopticMap& map, const DepthMap& depth) {
  const bool has_depth = !depth.mm.empty();
  if (has_depth && (depth.width != map.width() || depth.height != map.height())) {
    throw DimensionError(fmt::format("depth map {}x{} vs panoptic map {}x{}", depth.width, depth.height, map.width(),
                                     map.height()));
  }
  auto accs = kernels::parallel::accumulate_segments(map.packed(), map.width(),
                                                     has_depth ? std::span<const std::uint16_t>(depth.mm)
                                                               : std::span<const std::uint16_t>());
  std::vector<SegmentInfo> out;
  out.reserve(accs.size());
  for (auto& a : accs) {
    SegmentInfo s;
    s.instance_id = label_instance(a.label);
    s.class_id = label_class(a.label);
    s.area = a.area;
    s.centroid_row = static_cast<double>(a.sum_row) / static_cast<double>(a.area);
    s.centroid_col = static_cast<double>(a.sum_col) / static_cast<double>(a.area);
    s.valid_depth_fraction = static_cast<double>(a.valid_depths.size()) / static_cast<double>(a.area);
    if (!a.valid_depths.empty()) {
      auto& v = a.valid_depths;
      const std::size_t mid = (v.size() - 1) / 2;  // lower median
      std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
      s.distance_mm = v[mid];
    }
    s.sector = sectorize(s.centroid_col, map.width());
    out.push_back(s);
  }
  return out;
}

std::vector<SegmentInfo> nearest_things(const std::vector<SegmentInfo>& segments, const LabelSchema& schema) {
  std::vector<SegmentInfo> near;
  std::vector<SegmentInfo> unknown;
  for (const SegmentInfo& s : segments) {
    if (!schema.is_thing(s.class_id)) continue;
    (s.distance_mm ? near : unknown).push_back(s);
  }
  std::sort(near.begin(), near.end(), [](const SegmentInfo& a, const SegmentInfo& b) {
    if (*a.distance_mm != *b.distance_mm) return *a.distance_mm < *b.distance_mm;
    if (a.area != b.area) return a.area > b.area;
    if (a.instance_id != b.instance_id) return a.instance_id < b.instance_id;
    return a.class_id < b.class_id;
  });
  std::sort(unknown.begin(), unknown.end(), [](const SegmentInfo& a, const SegmentInfo& b) {
    if (a.instance_id != b.instance_id) return a.instance_id < b.instance_id;
    return a.class_id < b.class_id;
  });
  near.insert(near.end(), unknown.begin(), unknown.end());
  return near;
}

}  // namespace pnav
