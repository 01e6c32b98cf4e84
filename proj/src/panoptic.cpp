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

#include "pnav/panoptic.hpp"

#include <fmt/format.h>

#include <map>

#include "pnav/error.hpp"
#include "pnav/kernels.hpp"

namespace pnav {

PanopticMap::PanopticMap(int width, int height, std::vector<std::uint32_t> packed)
    : width_(width), height_(height), packed_(std::move(packed)) {
  if (width < 0 || height < 0 || packed_.size() != static_cast<std::size_t>(width) * height) {
    throw DimensionError(fmt::format("panoptic map {}x{} cannot hold {} pixels", width, height, packed_.size()));
  }
}

PanopticMap::PanopticMap(int width, int height, std::uint32_t fill)
    : width_(width), height_(height), packed_(static_cast<std::size_t>(width) * height, fill) {}

std::vector<SegmentEntry> PanopticMap::segment_index() const {
  std::map<InstanceId, SegmentEntry> by_id;
  for (const auto& [label, area] : kernels::parallel::label_histogram(packed_)) {
    const InstanceId inst = label_instance(label);
    if (inst == 0) continue;
    auto& e = by_id[inst];
    // A valid map has one class per instance id; if not, the entry keeps
    // the smallest packed label and check_panoptic reports the conflict.
    if (e.area == 0) e = SegmentEntry{inst, label_class(label), 0};
    e.area += area;
  }
  std::vector<SegmentEntry> out;
  out.reserve(by_id.size());
  for (auto& [id, e] : by_id) out.push_back(e);
  return out;
}

std::vector<ClassId> PanopticMap::class_plane() const {
  std::vector<ClassId> out(packed_.size());
  for (std::size_t i = 0; i < packed_.size(); ++i) out[i] = label_class(packed_[i]);
  return out;
}

std::optional<std::string> check_panoptic(const PanopticMap& map, const LabelSchema& schema) {
  std::map<InstanceId, ClassId> owner;
  const auto px = map.packed();
  for (std::size_t i = 0; i < px.size(); ++i) {
    const ClassId cls = label_class(px[i]);
    const InstanceId inst = label_instance(px[i]);
    const int row = static_cast<int>(i / map.width());
    const int col = static_cast<int>(i % map.width());
    const ClassDef* def = schema.find(cls);
    if (def == nullptr) return fmt::format("pixel ({}, {}) has unknown class {}", row, col, cls);
    if (def->is_thing && inst == 0) return fmt::format("thing pixel ({}, {}) of class {} has instance 0", row, col, cls);
    if (!def->is_thing && inst != 0) {
      return fmt::format("stuff/void pixel ({}, {}) of class {} has instance {}", row, col, cls, inst);
    }
    if (inst != 0) {
      auto [it, inserted] = owner.emplace(inst, cls);
      if (!inserted && it->second != cls) {
        return fmt::format("instance {} spans classes {} and {}", inst, it->second, cls);
      }
    }
  }
  return std::nullopt;
}

}  // namespace pnav
