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

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pnav {

// Row-major binary mask, one byte (0 or 1) per pixel.
class BitMask {
 public:
  BitMask() = default;
  BitMask(int width, int height);
  // Throws DimensionError if bits.size() != width * height.
  BitMask(int width, int height, std::vector<std::uint8_t> bits);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return bits_.size(); }

  bool at(int row, int col) const { return bits_[static_cast<std::size_t>(row) * width_ + col] != 0; }
  void set(int row, int col, bool v = true) {
    bits_[static_cast<std::size_t>(row) * width_ + col] = v ? 1 : 0;
  }
  std::span<const std::uint8_t> bits() const { return bits_; }
  std::span<std::uint8_t> mutable_bits() { return bits_; }

  std::size_t area() const;
  bool empty() const { return area() == 0; }

  friend bool operator==(const BitMask&, const BitMask&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

// Run-length form. Runs alternate zero/one starting with a (possibly empty)
// zero-run, in ROW-MAJOR raster order. Note that COCO-style toolkits use
// column-major runs; these are not interchangeable.
struct RleMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint32_t> runs;
  friend bool operator==(const RleMask&, const RleMask&) = default;
};

// Inclusive pixel coordinates.
struct Box {
  int x_min = 0;
  int y_min = 0;
  int x_max = 0;
  int y_max = 0;

  std::int64_t area() const {
    return static_cast<std::int64_t>(x_max - x_min + 1) * (y_max - y_min + 1);
  }
  friend bool operator==(const Box&, const Box&) = default;
};

RleMask rle_encode(const BitMask& mask);
// Throws MalformedMask when the run sum differs from width*height or an
// interior run is zero.
BitMask rle_decode(const RleMask& rle);

// Checks the RleMask invariants without decoding; returns an error message
// or an empty optional.
std::optional<std::string> rle_check(const RleMask& rle);

// Canonical byte form of the runs (u32 little-endian each). Used as the
// deterministic tie-break key wherever masks need a total order.
std::vector<std::uint8_t> rle_bytes(const RleMask& rle);
std::vector<std::uint8_t> mask_key(const BitMask& mask);

// Fixture text form "W H: c0 c1 c2 ...".
std::string rle_to_text(const RleMask& rle);
RleMask rle_from_text(std::string_view text);

// |a & b| / |a | b|; 0 when both are empty. Throws DimensionError.
double mask_iou(const BitMask& a, const BitMask& b);
double box_iou(const Box& a, const Box& b);
std::optional<Box> bbox_of_mask(const BitMask& mask);
BitMask fill_box(const Box& box, int width, int height);

}  // namespace pnav
