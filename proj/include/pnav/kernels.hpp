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

// Pixel-loop kernels. Every kernel exists twice: `serial` is the plain
// reference used by tests and benchmarks, `parallel` is the OpenMP version
// the library calls. Both return identical results (integer accumulation,
// outputs ordered by key).

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace pnav::kernels {

// Below this many pixels the parallel kernels run on one thread.
inline constexpr std::size_t kParallelMinPixels = 1u << 14;

using LabelCount = std::pair<std::uint32_t, std::uint64_t>;
using PairCount = std::pair<std::uint64_t, std::uint64_t>;  // (pred << 32 | gt, pixels)

struct SegmentAccum {
  std::uint32_t label = 0;
  std::uint64_t area = 0;
  std::uint64_t sum_row = 0;
  std::uint64_t sum_col = 0;
  std::vector<std::uint16_t> valid_depths;  // nonzero depth samples, unordered
};

namespace serial {

std::vector<LabelCount> label_histogram(std::span<const std::uint32_t> labels);
std::vector<PairCount> pair_histogram(std::span<const std::uint32_t> pred, std::span<const std::uint32_t> gt);
// Row = gt index, column = pred index; pixels whose gt maps to a negative
// index or to `skip_gt` are not counted. `lut` maps class id -> dense index.
std::vector<std::uint64_t> confusion_tally(std::span<const std::uint16_t> pred, std::span<const std::uint16_t> gt,
                                           std::span<const int> lut, int n, int skip_gt);
// `depth` may be empty (no depth plane).
std::vector<SegmentAccum> accumulate_segments(std::span<const std::uint32_t> labels, int width,
                                              std::span<const std::uint16_t> depth);
std::uint64_t count_unowned(std::span<const std::uint8_t> mask, std::span<const std::int32_t> owner);
void claim_unowned(std::span<const std::uint8_t> mask, std::span<std::int32_t> owner, std::int32_t id);
std::vector<LabelCount> unowned_class_histogram(std::span<const std::uint16_t> classes,
                                                std::span<const std::int32_t> owner);

}  // namespace serial

namespace parallel {

std::vector<LabelCount> label_histogram(std::span<const std::uint32_t> labels);
std::vector<PairCount> pair_histogram(std::span<const std::uint32_t> pred, std::span<const std::uint32_t> gt);
std::vector<std::uint64_t> confusion_tally(std::span<const std::uint16_t> pred, std::span<const std::uint16_t> gt,
                                           std::span<const int> lut, int n, int skip_gt);
std::vector<SegmentAccum> accumulate_segments(std::span<const std::uint32_t> labels, int width,
                                              std::span<const std::uint16_t> depth);
std::uint64_t count_unowned(std::span<const std::uint8_t> mask, std::span<const std::int32_t> owner);
void claim_unowned(std::span<const std::uint8_t> mask, std::span<std::int32_t> owner, std::int32_t id);
std::vector<LabelCount> unowned_class_histogram(std::span<const std::uint16_t> classes,
                                                std::span<const std::int32_t> owner);

}  // namespace parallel

int max_threads();

}  // namespace pnav::kernels
