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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace pnav {

inline constexpr std::array<std::uint8_t, 4> kWireMagic = {0x50, 0x41, 0x4E, 0x4F};  // "PANO"
inline constexpr std::uint8_t kWireVersion = 1;
inline constexpr std::size_t kWireHeaderSize = 10;  // magic, version, type, u32 length
inline constexpr std::size_t kWireTrailerSize = 4;  // crc32
inline constexpr std::uint32_t kMaxPayload = 64u << 20;

enum class MsgType : std::uint8_t { kFrame = 1, kFeedback = 2, kHeartbeat = 3, kSchema = 4 };

struct WireMessage {
  MsgType type = MsgType::kHeartbeat;
  std::vector<std::uint8_t> payload;
  friend bool operator==(const WireMessage&, const WireMessage&) = default;
};

// CRC-32 (reflected 0xEDB88320, init and final xor 0xFFFFFFFF).
std::uint32_t crc32(std::span<const std::uint8_t> data);

// header | payload | crc32 over header and payload. Throws InvalidArgument
// when the payload exceeds kMaxPayload.
std::vector<std::uint8_t> frame_message(MsgType type, std::span<const std::uint8_t> payload);
inline std::vector<std::uint8_t> frame_message(const WireMessage& m) { return frame_message(m.type, m.payload); }

enum class ParseStatus {
  kOk,
  kNeedMore,       // buffer holds a valid prefix; nothing consumed
  kBadMagic,
  kBadVersion,
  kBadType,
  kCrcMismatch,
  kOversize,
};

std::string_view parse_status_name(ParseStatus s);

struct ParseResult {
  ParseStatus status = ParseStatus::kNeedMore;
  std::optional<WireMessage> message;  // set iff status == kOk
  // Bytes to drop from the front of the buffer. On errors this skips to the
  // next occurrence of the magic (or to the last bytes that could still
  // begin one), so the following call resynchronizes.
  std::size_t consumed = 0;
};

// Parses at most one message from the front of `stream`. The payload length
// is checked against kMaxPayload before anything is allocated.
ParseResult parse_message(std::span<const std::uint8_t> stream);

// Accumulates stream bytes and yields messages and errors in arrival order.
class MessageReader {
 public:
  void feed(std::span<const std::uint8_t> bytes);
  // Next complete message or error; kNeedMore when the buffer is exhausted.
  ParseResult next();
  std::size_t buffered() const { return buf_.size() - head_; }

 private:
  std::vector<std::uint8_t> buf_;
  std::size_t head_ = 0;
};

}  // namespace pnav
