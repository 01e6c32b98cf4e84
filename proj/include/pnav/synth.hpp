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

#include "pnav/frame.hpp"
#include "pnav/schema.hpp"

namespace pnav {

// Synthetic street scenes for fixtures, benchmarks and latency checks.
// Needs a schema with the classes sky, building, sidewalk, road,
// vegetation, person, car, pole, bike and traffic-light (the default one).
struct WalkConfig {
  int width = 160;
  int height = 120;
  std::size_t frames = 40;
  std::uint64_t cadence_us = 250'000;
  std::uint32_t seed = 7;
  bool with_rgb = false;
};

// A walk past parked cars, pedestrians and poles: objects approach and
// drift sideways across frames; every frame has semantic, instance and
// depth planes (plus RGB when requested). Deterministic for a given config.
std::vector<Frame> synthesize_walk(const WalkConfig& config, const LabelSchema& schema);

// One cluttered frame with exactly `instances` thing predictions (some of
// them overlapping) on a street background.
Frame synthesize_dense_frame(int width, int height, int instances, std::uint32_t seed, const LabelSchema& schema);

}  // namespace pnav
