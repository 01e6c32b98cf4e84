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

#include "pnav/frame.hpp"

#include <fmt/format.h>

#include <cmath>

#include "pnav/bytes.hpp"

namespace pnav {
namespace {

// Upper bound on the pixels of all decoded instance masks of one frame
// (~128 full-resolution masks).
constexpr std::uint64_t kMaxInstancePixels = 256ull << 20;

bool dims_allowed(int w, int h) {
  if (w < 0 || h < 0) return false;
  return (w <= kMaxLongSide && h <= kMaxShortSide) || (w <= kMaxShortSide && h <= kMaxLongSide);
}

}  // namespace

std::uint8_t Frame::plane_bits() const {
  std::uint8_t bits = 0;
  if (rgb) bits |= kPlaneRgb;
  if (semantic) bits |= kPlaneSemantic;
  if (depth) bits |= kPlaneDepth;
  if (panoptic) bits |= kPlanePanoptic;
  if (instances) bits |= kPlaneInstances;
  return bits;
}

std::vector<std::string> plane_names(std::uint8_t bits) {
  std::vector<std::string> out;
  if (bits & kPlaneRgb) out.emplace_back("rgb");
  if (bits & kPlaneSemantic) out.emplace_back("semantic");
  if (bits & kPlaneDepth) out.emplace_back("depth");
  if (bits & kPlanePanoptic) out.emplace_back("panoptic");
  if (bits & kPlaneInstances) out.emplace_back("instances");
  return out;
}

std::string_view decode_errc_name(DecodeErrc code) {
  switch (code) {
    case DecodeErrc::kTruncated:
      return "truncated";
    case DecodeErrc::kUnknownPlaneBits:
      return "unknown-plane-bits";
    case DecodeErrc::kPlaneLengthMismatch:
      return "plane-length-mismatch";
    case DecodeErrc::kRunSumMismatch:
      return "run-sum-mismatch";
    case DecodeErrc::kDimensionOverflow:
      return "dimension-overflow";
    case DecodeErrc::kBadValue:
      return "bad-value";
    case DecodeErrc::kTrailingBytes:
      return "trailing-bytes";
  }
  return "unknown";
}

std::uint32_t confidence_to_micro(double confidence) {
  return static_cast<std::uint32_t>(std::llround(confidence * 1e6));
}

std::vector<std::uint8_t> encode_frame(const Frame& f) {
  if (!dims_allowed(f.width, f.height)) {
    throw EncodeError(fmt::format("frame {}x{} exceeds {}x{}", f.width, f.height, kMaxLongSide, kMaxShortSide));
  }
  const std::size_t pixels = static_cast<std::size_t>(f.width) * f.height;
  ByteWriter w;
  w.u64(f.frame_id);
  w.u64(f.timestamp_us);
  w.u16(static_cast<std::uint16_t>(f.width));
  w.u16(static_cast<std::uint16_t>(f.height));
  w.u8(f.plane_bits());

  if (f.rgb) {
    if (f.rgb->size() != pixels * 3) throw EncodeError("rgb plane size does not match frame dimensions");
    w.u32(static_cast<std::uint32_t>(f.rgb->size()));
    w.bytes(*f.rgb);
  }
  if (f.semantic) {
    if (f.semantic->width != f.width || f.semantic->height != f.height || f.semantic->ids.size() != pixels) {
      throw EncodeError("semantic plane dimensions do not match frame");
    }
    w.u32(static_cast<std::uint32_t>(pixels * 2));
    for (ClassId id : f.semantic->ids) w.u16(id);
  }
  if (f.depth) {
    if (f.depth->width != f.width || f.depth->height != f.height || f.depth->mm.size() != pixels) {
      throw EncodeError("depth plane dimensions do not match frame");
    }
    w.u32(static_cast<std::uint32_t>(pixels * 2));
    for (std::uint16_t d : f.depth->mm) w.u16(d);
  }
  if (f.panoptic) {
    if (f.panoptic->width() != f.width || f.panoptic->height() != f.height) {
      throw EncodeError("panoptic plane dimensions do not match frame");
    }
    w.u32(static_cast<std::uint32_t>(pixels * 4));
    for (std::uint32_t v : f.panoptic->packed()) w.u32(v);
  }
  if (f.instances) {
    if (f.instances->size() > 0xFFFF) throw EncodeError("more than 65535 instances");
    const std::size_t len_at = w.placeholder_u32();
    const std::size_t start = w.size();
    w.u16(static_cast<std::uint16_t>(f.instances->size()));
    std::uint64_t budget = 0;
    for (const InstancePrediction& p : *f.instances) {
      if (p.mask.width() != f.width || p.mask.height() != f.height) {
        throw EncodeError("instance mask dimensions do not match frame");
      }
      budget += pixels;
      if (budget > kMaxInstancePixels) throw EncodeError("instance masks exceed the per-frame pixel budget");
      if (!(p.confidence >= 0.0 && p.confidence <= 1.0)) {
        throw EncodeError(fmt::format("confidence {} outside [0, 1]", p.confidence));
      }
      w.u16(p.class_id);
      w.u32(confidence_to_micro(p.confidence));
      if (p.box) {
        const Box& b = *p.box;
        if (b.x_min < 0 || b.y_min < 0 || b.x_min > b.x_max || b.y_min > b.y_max || b.x_max >= f.width ||
            b.y_max >= f.height) {
          throw EncodeError("instance box outside the frame");
        }
        w.u8(1);
        w.u16(static_cast<std::uint16_t>(b.x_min));
        w.u16(static_cast<std::uint16_t>(b.y_min));
        w.u16(static_cast<std::uint16_t>(b.x_max));
        w.u16(static_cast<std::uint16_t>(b.y_max));
      } else {
        w.u8(0);
        for (int k = 0; k < 4; ++k) w.u16(0);
      }
      const RleMask rle = rle_encode(p.mask);
      w.u32(static_cast<std::uint32_t>(rle.runs.size()));
      for (std::uint32_t r : rle.runs) w.u32(r);
    }
    w.patch_u32(len_at, static_cast<std::uint32_t>(w.size() - start));
  }
  return w.take();
}

namespace {

[[noreturn]] void fail(DecodeErrc code, const std::string& msg) {
  throw DecodeError(code, fmt::format("{}: {}", decode_errc_name(code), msg));
}

std::span<const std::uint8_t> plane_payload(ByteReader& r, const char* name, std::size_t expected) {
  std::uint32_t len = 0;
  if (!r.u32(len)) fail(DecodeErrc::kTruncated, fmt::format("missing length of {} plane", name));
  if (expected != 0 && len != expected) {
    fail(DecodeErrc::kPlaneLengthMismatch, fmt::format("{} plane declares {} bytes, expected {}", name, len, expected));
  }
  std::span<const std::uint8_t> payload;
  if (!r.take(len, payload)) {
    fail(DecodeErrc::kTruncated, fmt::format("{} plane cut short: {} of {} bytes", name, r.remaining(), len));
  }
  return payload;
}

std::vector<InstancePrediction> decode_instances(std::span<const std::uint8_t> payload, int width, int height) {
  ByteReader r(payload);
  std::uint16_t count = 0;
  if (!r.u16(count)) fail(DecodeErrc::kTruncated, "instances plane: missing count");
  const std::uint64_t pixels = static_cast<std::uint64_t>(width) * height;
  if (pixels * count > kMaxInstancePixels) {
    fail(DecodeErrc::kBadValue, fmt::format("instances plane: {} masks exceed the per-frame pixel budget", count));
  }
  std::vector<InstancePrediction> out;
  for (std::uint16_t i = 0; i < count; ++i) {
    InstancePrediction p;
    std::uint32_t micro = 0;
    std::uint8_t has_box = 0;
    std::uint16_t bx[4] = {};
    std::uint32_t n_runs = 0;
    if (!r.u16(p.class_id) || !r.u32(micro) || !r.u8(has_box) || !r.u16(bx[0]) || !r.u16(bx[1]) || !r.u16(bx[2]) ||
        !r.u16(bx[3]) || !r.u32(n_runs)) {
      fail(DecodeErrc::kTruncated, fmt::format("instances plane: record {} cut short", i));
    }
    if (micro > 1'000'000) fail(DecodeErrc::kBadValue, fmt::format("instance {}: confidence {} > 1e6 micro", i, micro));
    p.confidence = micro / 1e6;
    if (has_box > 1) fail(DecodeErrc::kBadValue, fmt::format("instance {}: box flag {}", i, has_box));
    if (has_box == 1) {
      Box b{bx[0], bx[1], bx[2], bx[3]};
      if (b.x_min > b.x_max || b.y_min > b.y_max || b.x_max >= width || b.y_max >= height) {
        fail(DecodeErrc::kBadValue, fmt::format("instance {}: box outside frame", i));
      }
      p.box = b;
    } else if (bx[0] != 0 || bx[1] != 0 || bx[2] != 0 || bx[3] != 0) {
      fail(DecodeErrc::kBadValue, fmt::format("instance {}: absent box with nonzero coordinates", i));
    }
    if (static_cast<std::uint64_t>(n_runs) * 4 > r.remaining()) {
      fail(DecodeErrc::kTruncated, fmt::format("instance {}: {} runs do not fit in the plane", i, n_runs));
    }
    RleMask rle{width, height, {}};
    rle.runs.resize(n_runs);
    std::uint64_t sum = 0;
    for (std::uint32_t k = 0; k < n_runs; ++k) {
      r.u32(rle.runs[k]);
      sum += rle.runs[k];
    }
    if (sum != pixels || n_runs == 0) {
      fail(DecodeErrc::kRunSumMismatch, fmt::format("instance {}: runs sum to {}, expected {}", i, sum, pixels));
    }
    if (auto err = rle_check(rle)) fail(DecodeErrc::kBadValue, fmt::format("instance {}: {}", i, *err));
    p.mask = rle_decode(rle);
    out.push_back(std::move(p));
  }
  if (r.remaining() != 0) {
    fail(DecodeErrc::kPlaneLengthMismatch,
         fmt::format("instances plane has {} bytes past its last record", r.remaining()));
  }
  return out;
}

}  // namespace

Frame decode_frame(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  Frame f;
  std::uint16_t w = 0;
  std::uint16_t h = 0;
  std::uint8_t bits = 0;
  if (!r.u64(f.frame_id) || !r.u64(f.timestamp_us) || !r.u16(w) || !r.u16(h) || !r.u8(bits)) {
    fail(DecodeErrc::kTruncated, fmt::format("header needs {} bytes, got {}", kFrameHeaderSize, bytes.size()));
  }
  if (!dims_allowed(w, h)) fail(DecodeErrc::kDimensionOverflow, fmt::format("frame {}x{} too large", w, h));
  if (bits & ~kKnownPlaneBits) fail(DecodeErrc::kUnknownPlaneBits, fmt::format("plane bits 0x{:02x}", bits));
  f.width = w;
  f.height = h;
  const std::size_t pixels = static_cast<std::size_t>(w) * h;

  if (bits & kPlaneRgb) {
    auto p = plane_payload(r, "rgb", pixels * 3);
    f.rgb.emplace(p.begin(), p.end());
  }
  if (bits & kPlaneSemantic) {
    auto p = plane_payload(r, "semantic", pixels * 2);
    SemanticMap m(w, h);
    ByteReader pr(p);
    for (auto& id : m.ids) pr.u16(id);
    f.semantic = std::move(m);
  }
  if (bits & kPlaneDepth) {
    auto p = plane_payload(r, "depth", pixels * 2);
    DepthMap m(w, h);
    ByteReader pr(p);
    for (auto& d : m.mm) pr.u16(d);
    f.depth = std::move(m);
  }
  if (bits & kPlanePanoptic) {
    auto p = plane_payload(r, "panoptic", pixels * 4);
    std::vector<std::uint32_t> packed(pixels);
    ByteReader pr(p);
    for (auto& v : packed) pr.u32(v);
    f.panoptic = PanopticMap(w, h, std::move(packed));
  }
  if (bits & kPlaneInstances) {
    auto p = plane_payload(r, "instances", 0);
    f.instances = decode_instances(p, w, h);
  }
  if (r.remaining() != 0) fail(DecodeErrc::kTrailingBytes, fmt::format("{} bytes after the last plane", r.remaining()));
  return f;
}

}  // namespace pnav
