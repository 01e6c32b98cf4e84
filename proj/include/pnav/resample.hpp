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
#include <string_view>

#include "pnav/panoptic.hpp"

namespace pnav {

enum class Resample { kNearest, kBilinear };

std::optional<Resample> parse_resample(std::string_view name);

// Label planes are resampled by pixel-center mapping. kBilinear takes a
// weighted vote among the four bilinear neighbours (ties: smaller label);
// masks threshold the bilinear weight of set pixels at 0.5.
SemanticMap resample(const SemanticMap& map, int width, int height, Resample mode);
PanopticMap resample(const PanopticMap& map, int width, int height, Resample mode);
BitMask resample(const BitMask& mask, int width, int height, Resample mode);

}  // namespace pnav
