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

#include <algorithm>
#include <map>

#include "pnav/kernels.hpp"

namespace pnav::kernels::serial {

std::vector<LabelCount> label_histogram(std::span<const std::uint32_t> labels) {
  std::map<std::uint32_t, std::uint64_t> counts;
  for (std::uint32_t l : labels) ++counts[l];
  return {counts.begin(), counts.end()};
}

std::vector<PairCount> pair_histogram(std::span<const std::uint32_t> pred, std::span<const std::uint32_t> gt) {
  std::map<std::uint64_t, std::uint64_t> counts;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    ++counts[(static_cast<std::uint64_t>(pred[i]) << 32) | gt[i]];
  }
  return {counts.begin(), counts.end()};
}

std::vector<std::uint64_t> confusion_tally(std::span<const std::uint16_t> pred, std::span<const std::uint16_t> gt,
                                           std::span<const int> lut, int n, int skip_gt) {
  std::vector<std::uint64_t> m(static_cast<std::size_t>(n) * n, 0);
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const int g = lut[gt[i]];
    const int p = lut[pred[i]];
    if (g < 0 || g == skip_gt || p < 0) continue;
    ++m[static_cast<std::size_t>(g) * n + p];
  }
  return m;
}

std::vector<SegmentAccum> accumulate_segments(std::span<const std::uint32_t> labels, int width,
                                              std::span<const std::uint16_t> depth) {
  std::map<std::uint32_t, SegmentAccum> acc;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    SegmentAccum& a = acc[labels[i]];
    a.label = labels[i];
    ++a.area;
    a.sum_row += i / static_cast<std::size_t>(width);
    a.sum_col += i % static_cast<std::size_t>(width);
    if (!depth.empty() && depth[i] != 0) a.valid_depths.push_back(depth[i]);
  }
  std::vector<SegmentAccum> out;
  out.reserve(acc.size());
  for (auto& [label, a] : acc) out.push_back(std::move(a));
  return out;
}

std::uint64_t count_unowned(std::span<const std::uint8_t> mask, std::span<const std::int32_t> owner) {
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) n += (mask[i] != 0 && owner[i] == 0) ? 1 : 0;
  return n;
}

void claim_unowned(std::span<const std::uint8_t> mask, std::span<std::int32_t> owner, std::int32_t id) {
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i] != 0 && owner[i] == 0) owner[i] = id;
  }
}

std::vector<LabelCount> unowned_class_histogram(std::span<const std::uint16_t> classes,
                                                std::span<const std::int32_t> owner) {
  std::map<std::uint32_t, std::uint64_t> counts;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (owner[i] == 0) ++counts[classes[i]];
  }
  return {counts.begin(), counts.end()};
}

}  // namespace pnav::kernels::serial
