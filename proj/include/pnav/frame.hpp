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
#include <span>
#include <string>
#include <vector>

#include "pnav/error.hpp"
#include "pnav/panoptic.hpp"

namespace pnav {

inline constexpr int kMaxLongSide = 1920;
inline constexpr int kMaxShortSide = 1080;

enum PlaneBit : std::uint8_t {
  kPlaneRgb = 0x01,
  kPlaneSemantic = 0x02,
  kPlaneDepth = 0x04,
  kPlanePanoptic = 0x08,
  kPlaneInstances = 0x10,
};
inline constexpr std::uint8_t kKnownPlaneBits = 0x1F;

struct Frame {
  std::uint64_t frame_id = 0;
  std::uint64_t timestamp_us = 0;
  int width = 0;
  int height = 0;
  std::optional<std::vector<std::uint8_t>> rgb;  // interleaved RGB, 3 bytes per pixel
  std::optional<SemanticMap> semantic;
  std::optional<DepthMap> depth;
  std::optional<PanopticMap> panoptic;
  std::optional<std::vector<InstancePrediction>> instances;

  std::uint8_t plane_bits() const;
  friend bool operator==(const Frame&, const Frame&) = default;
};

std::vector<std::string> plane_names(std::uint8_t bits);

enum class DecodeErrc {
  kTruncated,
  kUnknownPlaneBits,
  kPlaneLengthMismatch,
  kRunSumMismatch,
  kDimensionOverflow,
  kBadValue,
  kTrailingBytes,
};

std::string_view decode_errc_name(DecodeErrc code);

class DecodeError : public Error {
 public:
  DecodeError(DecodeErrc code, const std::string& what) : Error(what), code_(code) {}
  DecodeErrc code() const { return code_; }

 private:
  DecodeErrc code_;
};

// Encode errors (bad dimensions, mismatched planes, out-of-range values).
class EncodeError : public Error {
 public:
  using Error::Error;
};

// Canonical little-endian layout:
//   u64 frame_id | u64 timestamp_us | u16 width | u16 height | u8 plane bits
//   then for each present plane in bit order: u32 length | payload
//     rgb: 3 bytes/pixel; semantic: u16/pixel; depth: u16 mm/pixel;
//     panoptic: u32/pixel (class * 65536 + instance);
//     instances: u16 count, then per instance
//       u16 class | u32 confidence (micro-units) | u8 has_box | 4 x u16 box
//       | u32 run count | u32 runs[]   (absent boxes are written as zeros)
std::vector<std::uint8_t> encode_frame(const Frame& frame);
// Never aborts: every malformed input raises DecodeError.
Frame decode_frame(std::span<const std::uint8_t> bytes);

// round(confidence * 1e6)
std::uint32_t confidence_to_micro(double confidence);

inline constexpr std::size_t kFrameHeaderSize = 21;

}  // namespace pnav
