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

#include "pnav/resample.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace pnav {

std::optional<Resample> parse_resample(std::string_view name) {
  if (name == "nearest") return Resample::kNearest;
  if (name == "bilinear") return Resample::kBilinear;
  return std::nullopt;
}

namespace {

struct Tap {
  int i0, i1;
  double w1;  // weight of i1; i0 gets 1 - w1
};

Tap bilinear_tap(int dst, int dst_size, int src_size) {
  const double x = (dst + 0.5) * src_size / dst_size - 0.5;
  const double xf = std::floor(x);
  int i0 = static_cast<int>(xf);
  double w1 = x - xf;
  int i1 = i0 + 1;
  i0 = std::clamp(i0, 0, src_size - 1);
  i1 = std::clamp(i1, 0, src_size - 1);
  return {i0, i1, w1};
}

int nearest_index(int dst, int dst_size, int src_size) {
  const auto s = static_cast<int>(std::floor((dst + 0.5) * src_size / dst_size));
  return std::clamp(s, 0, src_size - 1);
}

template <typename T>
std::vector<T> resample_labels(const std::vector<T>& src, int sw, int sh, int dw, int dh, Resample mode) {
  std::vector<T> out(static_cast<std::size_t>(dw) * dh);
  if (sw == 0 || sh == 0) return out;
  for (int r = 0; r < dh; ++r) {
    for (int c = 0; c < dw; ++c) {
      T value;
      if (mode == Resample::kNearest) {
        value = src[static_cast<std::size_t>(nearest_index(r, dh, sh)) * sw + nearest_index(c, dw, sw)];
      } else {
        const Tap ty = bilinear_tap(r, dh, sh);
        const Tap tx = bilinear_tap(c, dw, sw);
        const std::array<std::pair<T, double>, 4> taps = {{
            {src[static_cast<std::size_t>(ty.i0) * sw + tx.i0], (1 - ty.w1) * (1 - tx.w1)},
            {src[static_cast<std::size_t>(ty.i0) * sw + tx.i1], (1 - ty.w1) * tx.w1},
            {src[static_cast<std::size_t>(ty.i1) * sw + tx.i0], ty.w1 * (1 - tx.w1)},
            {src[static_cast<std::size_t>(ty.i1) * sw + tx.i1], ty.w1 * tx.w1},
        }};
        T best = taps[0].first;
        double best_w = -1.0;
        for (const auto& [label, unused] : taps) {
          double w = 0.0;
          for (const auto& [l2, w2] : taps) {
            if (l2 == label) w += w2;
          }
          if (w > best_w + 1e-12 || (std::fabs(w - best_w) <= 1e-12 && label < best)) {
            best = label;
            best_w = w;
          }
        }
        value = best;
      }
      out[static_cast<std::size_t>(r) * dw + c] = value;
    }
  }
  return out;
}

}  // namespace

SemanticMap resample(const SemanticMap& map, int width, int height, Resample mode) {
  SemanticMap out(width, height);
  out.ids = resample_labels(map.ids, map.width, map.height, width, height, mode);
  return out;
}

PanopticMap resample(const PanopticMap& map, int width, int height, Resample mode) {
  std::vector<std::uint32_t> src(map.packed().begin(), map.packed().end());
  return PanopticMap(width, height, resample_labels(src, map.width(), map.height(), width, height, mode));
}

BitMask resample(const BitMask& mask, int width, int height, Resample mode) {
  std::vector<std::uint8_t> src(mask.bits().begin(), mask.bits().end());
  if (mode == Resample::kNearest) {
    return BitMask(width, height, resample_labels(src, mask.width(), mask.height(), width, height, mode));
  }
  std::vector<std::uint8_t> out(static_cast<std::size_t>(width) * height, 0);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const Tap ty = bilinear_tap(r, height, mask.height());
      const Tap tx = bilinear_tap(c, width, mask.width());
      const double v = (1 - ty.w1) * (1 - tx.w1) * mask.at(ty.i0, tx.i0) + (1 - ty.w1) * tx.w1 * mask.at(ty.i0, tx.i1) +
                       ty.w1 * (1 - tx.w1) * mask.at(ty.i1, tx.i0) + ty.w1 * tx.w1 * mask.at(ty.i1, tx.i1);
      out[static_cast<std::size_t>(r) * width + c] = v >= 0.5 ? 1 : 0;
    }
  }
  return BitMask(width, height, std::move(out));
}

}  // namespace pnav
