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
#include <vector>

#include "pnav/panoptic.hpp"
#include "pnav/schema.hpp"

namespace pnav {

struct FusionConfig {
  double confidence_threshold = 0.5;
  double overlap_keep_fraction = 0.5;
  std::uint64_t min_stuff_area = 4096;
  std::uint64_t min_instance_area = 16;
  // When set, min_stuff_area is ignored and scaled_min_stuff_area() of the
  // frame being fused is used instead.
  bool scale_stuff_area = false;

  // 4096 px at 480x640, scaled by pixel count (rounded to nearest).
  static std::uint64_t scaled_min_stuff_area(int width, int height);
  static FusionConfig defaults_for(int width, int height);

  // Throws InvalidArgument when a field is out of range.
  void validate() const;
};

// Merges ranked thing-instance predictions with a semantic map:
//  1. drop instances below the confidence threshold;
//  2. order by (confidence desc, class id asc, RLE bytes asc);
//  3. each instance claims its still-unclaimed pixels, and is kept only if
//     the claimed part is >= overlap_keep_fraction of its mask and
//     >= min_instance_area; kept instances get ids 1, 2, ...;
//  4. unclaimed pixels keep their stuff class if that class's unclaimed
//     area is >= min_stuff_area, otherwise (and for thing classes) void.
// Throws DimensionError on size mismatch and InvalidArgument for instances
// that are not valid thing predictions.
PanopticMap fuse_frame(const SemanticMap& semantic, const std::vector<InstancePrediction>& instances,
                       const LabelSchema& schema, const FusionConfig& cfg);

// Renumbers instance ids 1..N in order of first appearance (raster order).
PanopticMap relabel_canonical(const PanopticMap& map);

}  // namespace pnav
