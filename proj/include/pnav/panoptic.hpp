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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pnav/mask.hpp"
#include "pnav/schema.hpp"

namespace pnav {

using InstanceId = std::uint16_t;

// Packed panoptic value: class_id * 65536 + instance_id.
constexpr std::uint32_t pack_label(ClassId cls, InstanceId inst) {
  return (static_cast<std::uint32_t>(cls) << 16) | inst;
}
constexpr ClassId label_class(std::uint32_t packed) { return static_cast<ClassId>(packed >> 16); }
constexpr InstanceId label_instance(std::uint32_t packed) { return static_cast<InstanceId>(packed & 0xFFFFu); }

struct SemanticMap {
  int width = 0;
  int height = 0;
  std::vector<ClassId> ids;  // row-major

  SemanticMap() = default;
  SemanticMap(int w, int h, ClassId fill = 0) : width(w), height(h), ids(static_cast<std::size_t>(w) * h, fill) {}
  ClassId at(int row, int col) const { return ids[static_cast<std::size_t>(row) * width + col]; }
  friend bool operator==(const SemanticMap&, const SemanticMap&) = default;
};

struct DepthMap {
  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> mm;  // row-major millimeters, 0 = no return

  DepthMap() = default;
  DepthMap(int w, int h, std::uint16_t fill = 0) : width(w), height(h), mm(static_cast<std::size_t>(w) * h, fill) {}
  friend bool operator==(const DepthMap&, const DepthMap&) = default;
};

struct InstancePrediction {
  ClassId class_id = 0;
  double confidence = 0.0;
  BitMask mask;
  std::optional<Box> box;
  friend bool operator==(const InstancePrediction&, const InstancePrediction&) = default;
};

struct SegmentEntry {
  InstanceId instance_id = 0;
  ClassId class_id = 0;
  std::uint64_t area = 0;
  friend bool operator==(const SegmentEntry&, const SegmentEntry&) = default;
};

// Per-pixel (class, instance) assignment. Stuff and void pixels carry
// instance 0; thing pixels carry instance >= 1.
class PanopticMap {
 public:
  PanopticMap() = default;
  PanopticMap(int width, int height, std::vector<std::uint32_t> packed);
  PanopticMap(int width, int height, std::uint32_t fill = 0);

  int width() const { return width_; }
  int height() const { return height_; }
  std::span<const std::uint32_t> packed() const { return packed_; }
  std::span<std::uint32_t> mutable_packed() { return packed_; }
  std::uint32_t at(int row, int col) const { return packed_[static_cast<std::size_t>(row) * width_ + col]; }
  ClassId class_at(std::size_t i) const { return label_class(packed_[i]); }
  InstanceId instance_at(std::size_t i) const { return label_instance(packed_[i]); }

  // Segment index for instance ids >= 1, ascending by instance id.
  // Recomputed from the pixel grid on demand.
  std::vector<SegmentEntry> segment_index() const;
  std::vector<ClassId> class_plane() const;

  friend bool operator==(const PanopticMap&, const PanopticMap&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint32_t> packed_;
};

// Scans all structural invariants: class ids in schema, instance 0 exactly
// on stuff/void pixels, each instance id mapped to one class. Returns a
// description of the first violation.
std::optional<std::string> check_panoptic(const PanopticMap& map, const LabelSchema& schema);

}  // namespace pnav
