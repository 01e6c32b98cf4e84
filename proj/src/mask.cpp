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

#include "pnav/mask.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <numeric>

#include "pnav/error.hpp"

namespace pnav {

BitMask::BitMask(int width, int height)
    : width_(width), height_(height), bits_(static_cast<std::size_t>(width) * height, 0) {
  if (width < 0 || height < 0) throw DimensionError("negative mask dimensions");
}

BitMask::BitMask(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  if (width < 0 || height < 0 || bits_.size() != static_cast<std::size_t>(width) * height) {
    throw DimensionError(fmt::format("mask of {}x{} cannot hold {} bits", width, height, bits_.size()));
  }
  for (auto& b : bits_) b = b != 0 ? 1 : 0;
}

std::size_t BitMask::area() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

RleMask rle_encode(const BitMask& mask) {
  RleMask out{mask.width(), mask.height(), {}};
  std::uint8_t current = 0;
  std::uint32_t run = 0;
  for (std::uint8_t b : mask.bits()) {
    if (b != current) {
      out.runs.push_back(run);
      run = 0;
      current = b;
    }
    ++run;
  }
  if (run > 0 || out.runs.empty()) out.runs.push_back(run);
  return out;
}

std::optional<std::string> rle_check(const RleMask& rle) {
  if (rle.width < 0 || rle.height < 0) return "negative dimensions";
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < rle.runs.size(); ++i) {
    if (i > 0 && rle.runs[i] == 0) return fmt::format("zero-length interior run at index {}", i);
    sum += rle.runs[i];
  }
  const std::uint64_t expected = static_cast<std::uint64_t>(rle.width) * rle.height;
  if (sum != expected) return fmt::format("run sum {} != {}x{} = {}", sum, rle.width, rle.height, expected);
  if (rle.runs.empty()) return std::string("empty run list");
  return std::nullopt;
}

BitMask rle_decode(const RleMask& rle) {
  if (auto err = rle_check(rle)) throw MalformedMask("malformed RLE mask: " + *err);
  std::vector<std::uint8_t> bits;
  bits.reserve(static_cast<std::size_t>(rle.width) * rle.height);
  std::uint8_t value = 0;
  for (std::uint32_t run : rle.runs) {
    bits.insert(bits.end(), run, value);
    value ^= 1;
  }
  return BitMask(rle.width, rle.height, std::move(bits));
}

std::vector<std::uint8_t> rle_bytes(const RleMask& rle) {
  std::vector<std::uint8_t> out;
  out.reserve(rle.runs.size() * 4);
  for (std::uint32_t r : rle.runs) {
    for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>(r >> (8 * k)));
  }
  return out;
}

std::vector<std::uint8_t> mask_key(const BitMask& mask) { return rle_bytes(rle_encode(mask)); }

std::string rle_to_text(const RleMask& rle) {
  std::string out = fmt::format("{} {}:", rle.width, rle.height);
  for (std::uint32_t r : rle.runs) out += fmt::format(" {}", r);
  return out;
}

namespace {

template <typename T>
bool parse_number(std::string_view& s, T& value) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr == s.data()) return false;
  s.remove_prefix(static_cast<std::size_t>(ptr - s.data()));
  return true;
}

}  // namespace

RleMask rle_from_text(std::string_view text) {
  RleMask out;
  std::string_view s = text;
  if (!parse_number(s, out.width) || !parse_number(s, out.height) || s.empty() || s.front() != ':') {
    throw MalformedMask(fmt::format("bad RLE text header: \"{}\"", text));
  }
  s.remove_prefix(1);
  while (true) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\n' || s.front() == '\r')) s.remove_prefix(1);
    if (s.empty()) break;
    std::uint32_t run = 0;
    if (!parse_number(s, run)) throw MalformedMask(fmt::format("bad RLE count in \"{}\"", text));
    out.runs.push_back(run);
  }
  if (auto err = rle_check(out)) throw MalformedMask("malformed RLE mask: " + *err);
  return out;
}

double mask_iou(const BitMask& a, const BitMask& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw DimensionError(fmt::format("mask_iou: {}x{} vs {}x{}", a.width(), a.height(), b.width(), b.height()));
  }
  std::size_t inter = 0;
  std::size_t uni = 0;
  auto ab = a.bits();
  auto bb = b.bits();
  for (std::size_t i = 0; i < ab.size(); ++i) {
    inter += ab[i] & bb[i];
    uni += ab[i] | bb[i];
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double box_iou(const Box& a, const Box& b) {
  const int ix0 = std::max(a.x_min, b.x_min);
  const int iy0 = std::max(a.y_min, b.y_min);
  const int ix1 = std::min(a.x_max, b.x_max);
  const int iy1 = std::min(a.y_max, b.y_max);
  std::int64_t inter = 0;
  if (ix0 <= ix1 && iy0 <= iy1) inter = static_cast<std::int64_t>(ix1 - ix0 + 1) * (iy1 - iy0 + 1);
  const std::int64_t uni = a.area() + b.area() - inter;
  return uni <= 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

std::optional<Box> bbox_of_mask(const BitMask& mask) {
  Box box{mask.width(), mask.height(), -1, -1};
  bool any = false;
  for (int r = 0; r < mask.height(); ++r) {
    for (int c = 0; c < mask.width(); ++c) {
      if (!mask.at(r, c)) continue;
      any = true;
      box.x_min = std::min(box.x_min, c);
      box.y_min = std::min(box.y_min, r);
      box.x_max = std::max(box.x_max, c);
      box.y_max = std::max(box.y_max, r);
    }
  }
  if (!any) return std::nullopt;
  return box;
}

BitMask fill_box(const Box& box, int width, int height) {
  BitMask m(width, height);
  for (int r = std::max(0, box.y_min); r <= std::min(height - 1, box.y_max); ++r) {
    for (int c = std::max(0, box.x_min); c <= std::min(width - 1, box.x_max); ++c) m.set(r, c);
  }
  return m;
}

}  // namespace pnav
