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

#include <omp.h>

#include <algorithm>
#include <map>
#include <unordered_map>

#include "pnav/kernels.hpp"

namespace pnav::kernels {

int max_threads() { return omp_get_max_threads(); }

namespace parallel {
namespace {

int threads_for(std::size_t n) { return n >= kParallelMinPixels ? omp_get_max_threads() : 1; }

// Contiguous chunk [begin, end) of thread `t` out of `nt`.
std::pair<std::size_t, std::size_t> chunk(std::size_t n, int t, int nt) {
  const std::size_t per = (n + nt - 1) / nt;
  const std::size_t b = std::min(n, per * t);
  return {b, std::min(n, b + per)};
}

template <typename Key, typename KeyOf>
std::vector<std::pair<Key, std::uint64_t>> chunked_histogram(std::size_t n, KeyOf key_of, auto include) {
  const int nt = threads_for(n);
  std::vector<std::unordered_map<Key, std::uint64_t>> local(nt);
#pragma omp parallel num_threads(nt)
  {
    const int t = omp_get_thread_num();
    auto [b, e] = chunk(n, t, nt);
    auto& counts = local[t];
    // Neighbouring pixels usually share a key; count runs before hashing.
    bool have = false;
    Key run_key{};
    std::uint64_t run = 0;
    for (std::size_t i = b; i < e; ++i) {
      if (!include(i)) continue;
      const Key k = key_of(i);
      if (have && k == run_key) {
        ++run;
        continue;
      }
      if (have) counts[run_key] += run;
      have = true;
      run_key = k;
      run = 1;
    }
    if (have) counts[run_key] += run;
  }
  std::map<Key, std::uint64_t> merged;
  for (const auto& m : local) {
    for (const auto& [k, c] : m) merged[k] += c;
  }
  return {merged.begin(), merged.end()};
}

}  // namespace

std::vector<LabelCount> label_histogram(std::span<const std::uint32_t> labels) {
  return chunked_histogram<std::uint32_t>(
      labels.size(), [&](std::size_t i) { return labels[i]; }, [](std::size_t) { return true; });
}

std::vector<PairCount> pair_histogram(std::span<const std::uint32_t> pred, std::span<const std::uint32_t> gt) {
  return chunked_histogram<std::uint64_t>(
      pred.size(), [&](std::size_t i) { return (static_cast<std::uint64_t>(pred[i]) << 32) | gt[i]; },
      [](std::size_t) { return true; });
}

std::vector<std::uint64_t> confusion_tally(std::span<const std::uint16_t> pred, std::span<const std::uint16_t> gt,
                                           std::span<const int> lut, int n, int skip_gt) {
  const std::size_t cells = static_cast<std::size_t>(n) * n;
  const int nt = threads_for(gt.size());
  std::vector<std::vector<std::uint64_t>> local(nt, std::vector<std::uint64_t>(cells, 0));
#pragma omp parallel num_threads(nt)
  {
    const int t = omp_get_thread_num();
    auto [b, e] = chunk(gt.size(), t, nt);
    auto& m = local[t];
    for (std::size_t i = b; i < e; ++i) {
      const int g = lut[gt[i]];
      const int p = lut[pred[i]];
      if (g < 0 || g == skip_gt || p < 0) continue;
      ++m[static_cast<std::size_t>(g) * n + p];
    }
  }
  std::vector<std::uint64_t> out(cells, 0);
  for (const auto& m : local) {
    for (std::size_t c = 0; c < cells; ++c) out[c] += m[c];
  }
  return out;
}

std::vector<SegmentAccum> accumulate_segments(std::span<const std::uint32_t> labels, int width,
                                              std::span<const std::uint16_t> depth) {
  const int nt = threads_for(labels.size());
  std::vector<std::unordered_map<std::uint32_t, SegmentAccum>> local(nt);
#pragma omp parallel num_threads(nt)
  {
    const int t = omp_get_thread_num();
    auto [b, e] = chunk(labels.size(), t, nt);
    auto& acc = local[t];
    SegmentAccum* cur = nullptr;
    for (std::size_t i = b; i < e; ++i) {
      if (cur == nullptr || cur->label != labels[i]) {
        cur = &acc[labels[i]];
        cur->label = labels[i];
      }
      ++cur->area;
      cur->sum_row += i / static_cast<std::size_t>(width);
      cur->sum_col += i % static_cast<std::size_t>(width);
      if (!depth.empty() && depth[i] != 0) cur->valid_depths.push_back(depth[i]);
    }
  }
  std::map<std::uint32_t, SegmentAccum> merged;
  for (auto& m : local) {
    for (auto& [label, a] : m) {
      SegmentAccum& dst = merged[label];
      dst.label = label;
      dst.area += a.area;
      dst.sum_row += a.sum_row;
      dst.sum_col += a.sum_col;
      dst.valid_depths.insert(dst.valid_depths.end(), a.valid_depths.begin(), a.valid_depths.end());
    }
  }
  std::vector<SegmentAccum> out;
  out.reserve(merged.size());
  for (auto& [label, a] : merged) out.push_back(std::move(a));
  return out;
}

std::uint64_t count_unowned(std::span<const std::uint8_t> mask, std::span<const std::int32_t> owner) {
  const std::int64_t n = static_cast<std::int64_t>(mask.size());
  std::uint64_t total = 0;
#pragma omp parallel for reduction(+ : total) schedule(static) if (mask.size() >= kParallelMinPixels)
  for (std::int64_t i = 0; i < n; ++i) total += (mask[i] != 0 && owner[i] == 0) ? 1 : 0;
  return total;
}

void claim_unowned(std::span<const std::uint8_t> mask, std::span<std::int32_t> owner, std::int32_t id) {
  const std::int64_t n = static_cast<std::int64_t>(mask.size());
#pragma omp parallel for schedule(static) if (mask.size() >= kParallelMinPixels)
  for (std::int64_t i = 0; i < n; ++i) {
    if (mask[i] != 0 && owner[i] == 0) owner[i] = id;
  }
}

std::vector<LabelCount> unowned_class_histogram(std::span<const std::uint16_t> classes,
                                                std::span<const std::int32_t> owner) {
  return chunked_histogram<std::uint32_t>(
      classes.size(), [&](std::size_t i) { return static_cast<std::uint32_t>(classes[i]); },
      [&](std::size_t i) { return owner[i] == 0; });
}

}  // namespace parallel
}  // namespace pnav::kernels
