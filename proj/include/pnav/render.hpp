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
#include <filesystem>
#include <vector>

#include "pnav/depth.hpp"
#include "pnav/frame.hpp"
#include "pnav/schema.hpp"

namespace pnav {

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // interleaved RGB
  friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

// Boundary color of an instance: hue rotated by the golden angle per id.
Rgb instance_color(InstanceId id);

// Class colors (blended 50/50 with the RGB plane when given), instance
// boundaries in per-instance colors, and "<d>m" distance labels at thing
// centroids when they fit inside the image.
RgbImage render_overlay(const PanopticMap& map, const LabelSchema& schema, const std::vector<SegmentInfo>& segments,
                        const std::vector<std::uint8_t>* rgb = nullptr);

// 8-bit RGB PNG without alpha; identical images encode to identical bytes.
std::vector<std::uint8_t> encode_png(const RgbImage& image);
void write_png(const std::filesystem::path& path, const RgbImage& image);

}  // namespace pnav
