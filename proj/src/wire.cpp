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

#include "pnav/wire.hpp"

#include <fmt/format.h>
#include <zlib.h>

#include <algorithm>

#include "pnav/bytes.hpp"
#include "pnav/error.hpp"

namespace pnav {

std::uint32_t crc32(std::span<const std::uint8_t> data) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in bounded chunks.
  while (!data.empty()) {
    const std::size_t n = std::min<std::size_t>(data.size(), 1u << 30);
    crc = ::crc32(crc, data.data(), static_cast<uInt>(n));
    data = data.subspan(n);
  }
  return static_cast<std::uint32_t>(crc);
}

std::vector<std::uint8_t> frame_message(MsgType type, std::span<const std::uint8_t> payload) {
  if (payload.size() > kMaxPayload) {
    throw InvalidArgument(fmt::format("payload of {} bytes exceeds the {} byte cap", payload.size(), kMaxPayload));
  }
  ByteWriter w;
  w.bytes(kWireMagic);
  w.u8(kWireVersion);
  w.u8(static_cast<std::uint8_t>(type));
  w.u32(static_cast<std::uint32_t>(payload.size()));
  w.bytes(payload);
  auto out = w.take();
  const std::uint32_t crc = crc32(out);
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>(crc >> (8 * k)));
  return out;
}

std::string_view parse_status_name(ParseStatus s) {
  switch (s) {
    case ParseStatus::kOk:
      return "ok";
    case ParseStatus::kNeedMore:
      return "need-more";
    case ParseStatus::kBadMagic:
      return "bad-magic";
    case ParseStatus::kBadVersion:
      return "bad-version";
    case ParseStatus::kBadType:
      return "bad-type";
    case ParseStatus::kCrcMismatch:
      return "crc-mismatch";
    case ParseStatus::kOversize:
      return "oversize";
  }
  return "unknown";
}

namespace {

// Offset of the next position (>= 1) where the magic could start. A magic
// prefix at the very end of the buffer counts, so it is not discarded.
std::size_t resync_offset(std::span<const std::uint8_t> s) {
  for (std::size_t i = 1; i < s.size(); ++i) {
    const std::size_t n = std::min(kWireMagic.size(), s.size() - i);
    if (std::equal(kWireMagic.begin(), kWireMagic.begin() + n, s.begin() + i)) return i;
  }
  return s.size();
}

ParseResult error(ParseStatus status, std::span<const std::uint8_t> s) {
  return {status, std::nullopt, resync_offset(s)};
}

}  // namespace

ParseResult parse_message(std::span<const std::uint8_t> s) {
  const std::size_t have_magic = std::min(s.size(), kWireMagic.size());
  if (!std::equal(kWireMagic.begin(), kWireMagic.begin() + have_magic, s.begin())) {
    return error(ParseStatus::kBadMagic, s);
  }
  if (s.size() < kWireHeaderSize) return {ParseStatus::kNeedMore, std::nullopt, 0};
  if (s[4] != kWireVersion) return error(ParseStatus::kBadVersion, s);
  const std::uint8_t type = s[5];
  if (type < 1 || type > 4) return error(ParseStatus::kBadType, s);
  const std::uint32_t len = static_cast<std::uint32_t>(s[6]) | (static_cast<std::uint32_t>(s[7]) << 8) |
                            (static_cast<std::uint32_t>(s[8]) << 16) | (static_cast<std::uint32_t>(s[9]) << 24);
  if (len > kMaxPayload) return error(ParseStatus::kOversize, s);
  const std::size_t total = kWireHeaderSize + len + kWireTrailerSize;
  if (s.size() < total) return {ParseStatus::kNeedMore, std::nullopt, 0};
  const std::uint32_t want = crc32(s.first(kWireHeaderSize + len));
  const std::size_t c = kWireHeaderSize + len;
  const std::uint32_t got = static_cast<std::uint32_t>(s[c]) | (static_cast<std::uint32_t>(s[c + 1]) << 8) |
                            (static_cast<std::uint32_t>(s[c + 2]) << 16) |
                            (static_cast<std::uint32_t>(s[c + 3]) << 24);
  if (want != got) return error(ParseStatus::kCrcMismatch, s);
  WireMessage m;
  m.type = static_cast<MsgType>(type);
  m.payload.assign(s.begin() + kWireHeaderSize, s.begin() + kWireHeaderSize + len);
  return {ParseStatus::kOk, std::move(m), total};
}

void MessageReader::feed(std::span<const std::uint8_t> bytes) {
  if (head_ > 0 && head_ * 2 >= buf_.size()) {
    buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(head_));
    head_ = 0;
  }
  buf_.insert(buf_.end(), bytes.begin(), bytes.end());
}

ParseResult MessageReader::next() {
  std::span<const std::uint8_t> view(buf_.data() + head_, buf_.size() - head_);
  if (view.empty()) return {ParseStatus::kNeedMore, std::nullopt, 0};
  ParseResult r = parse_message(view);
  head_ += r.consumed;
  return r;
}

}  // namespace pnav
