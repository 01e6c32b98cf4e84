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

#include <fstream>
#include <nlohmann/json.hpp>

#include "doctest.h"
#include "pnav/frame.hpp"
#include "pnav/sequence.hpp"
#include "pnav/wire.hpp"
#include "support/testkit.hpp"

using namespace pnav;

namespace {

std::vector<std::uint8_t> from_hex(const std::string& hex) {
  std::vector<std::uint8_t> out;
  for (std::size_t i = 0; i + 1 < hex.size(); i += 2) {
    out.push_back(static_cast<std::uint8_t>(std::stoul(hex.substr(i, 2), nullptr, 16)));
  }
  return out;
}

const std::string kGoldenDir = PNAV_SOURCE_DIR "/tests/golden/wire/";

nlohmann::json golden_index() {
  std::ifstream in(kGoldenDir + "index.json");
  REQUIRE(in.good());
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("crc32 check value") {
  const std::string s = "123456789";
  CHECK(crc32({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()}) == 0xCBF43926u);
}

TEST_CASE("heartbeat layout") {
  const auto bytes = frame_message(MsgType::kHeartbeat, {});
  REQUIRE(bytes.size() == 14);
  CHECK(std::vector<std::uint8_t>(bytes.begin(), bytes.begin() + 10) ==
        std::vector<std::uint8_t>{'P', 'A', 'N', 'O', 1, 3, 0, 0, 0, 0});
  const auto r = parse_message(bytes);
  CHECK(r.status == ParseStatus::kOk);
  CHECK(r.consumed == 14);
  CHECK(r.message->type == MsgType::kHeartbeat);
  CHECK(r.message->payload.empty());
}

TEST_CASE("goldens parse and re-encode bit-exactly") {
  const auto index = golden_index();
  CHECK(index.size() == 5);
  for (const auto& g : index) {
    const std::string file = g["file"];
    CAPTURE(file);
    const auto bytes = read_file(kGoldenDir + file);
    CHECK(bytes.size() == g["size"].get<std::size_t>());
    const auto r = parse_message(bytes);
    REQUIRE(r.status == ParseStatus::kOk);
    CHECK(r.consumed == bytes.size());
    CHECK(static_cast<int>(r.message->type) == g["type"].get<int>());
    CHECK(r.message->payload == from_hex(g["payload_hex"]));
    const std::uint32_t crc = static_cast<std::uint32_t>(bytes[bytes.size() - 4]) |
                              static_cast<std::uint32_t>(bytes[bytes.size() - 3]) << 8 |
                              static_cast<std::uint32_t>(bytes[bytes.size() - 2]) << 16 |
                              static_cast<std::uint32_t>(bytes[bytes.size() - 1]) << 24;
    CHECK(crc == std::stoul(g["crc32"].get<std::string>(), nullptr, 16));
    CHECK(frame_message(*r.message) == bytes);
  }
}

TEST_CASE("golden frame payloads decode") {
  const auto tiny = parse_message(read_file(kGoldenDir + "frame_tiny.bin"));
  REQUIRE(tiny.status == ParseStatus::kOk);
  const Frame t = decode_frame(tiny.message->payload);
  CHECK(t.frame_id == 7);
  CHECK(t.width == 1);
  CHECK(t.height == 1);
  REQUIRE(t.semantic);
  CHECK(t.semantic->ids == std::vector<ClassId>{7});
  CHECK(t.plane_bits() == kPlaneSemantic);

  const auto small = parse_message(read_file(kGoldenDir + "frame_small.bin"));
  REQUIRE(small.status == ParseStatus::kOk);
  const Frame s = decode_frame(small.message->payload);
  CHECK(s.frame_id == 42);
  CHECK(s.timestamp_us == 250000);
  CHECK(s.plane_bits() == 0x1C);
  CHECK(s.depth->mm == std::vector<std::uint16_t>{1500, 0, 2500, 3000});
  CHECK(s.panoptic->at(0, 1) == pack_label(3, 1));
  CHECK(s.panoptic->at(1, 0) == pack_label(1, 0));
  REQUIRE(s.instances->size() == 1);
  const auto& p = s.instances->front();
  CHECK(p.class_id == 3);
  CHECK(p.confidence == doctest::Approx(0.75));
  CHECK(p.box == Box{1, 0, 1, 1});
  CHECK(p.mask == BitMask(2, 2, {0, 1, 0, 1}));
  CHECK(encode_frame(s) == small.message->payload);
}

TEST_CASE("parse errors") {
  const std::vector<std::uint8_t> payload{1, 2, 3, 4, 5};
  const auto msg = frame_message(MsgType::kFeedback, payload);

  SUBCASE("any single bit flip is rejected") {
    for (std::size_t i = 0; i < msg.size(); ++i) {
      for (int b = 0; b < 8; ++b) {
        auto bad = msg;
        bad[i] ^= static_cast<std::uint8_t>(1u << b);
        CHECK(parse_message(bad).status != ParseStatus::kOk);
      }
    }
  }
  SUBCASE("payload corruption is a crc mismatch") {
    auto bad = msg;
    bad[12] ^= 0x10;
    CHECK(parse_message(bad).status == ParseStatus::kCrcMismatch);
  }
  SUBCASE("prefixes need more") {
    for (std::size_t n = 0; n < msg.size(); ++n) {
      const auto r = parse_message(std::span(msg).first(n));
      CHECK(r.status == ParseStatus::kNeedMore);
      CHECK(r.consumed == 0);
    }
  }
  SUBCASE("bad version and type") {
    auto bad = msg;
    bad[4] = 2;
    CHECK(parse_message(bad).status == ParseStatus::kBadVersion);
    bad = msg;
    bad[5] = 9;
    CHECK(parse_message(bad).status == ParseStatus::kBadType);
  }
  SUBCASE("oversize length is refused from the header alone") {
    std::vector<std::uint8_t> hdr{'P', 'A', 'N', 'O', 1, 1, 0xFF, 0xFF, 0xFF, 0x7F};
    const auto r = parse_message(hdr);
    CHECK(r.status == ParseStatus::kOversize);
    CHECK(r.consumed > 0);
  }
  SUBCASE("oversize payload cannot be framed") {
    std::vector<std::uint8_t> big(kMaxPayload + 1);
    CHECK_THROWS_AS(frame_message(MsgType::kFrame, big), InvalidArgument);
  }
}

TEST_CASE("concatenated messages") {
  auto a = frame_message(MsgType::kHeartbeat, {});
  const std::vector<std::uint8_t> payload{9, 8, 7};
  const auto b = frame_message(MsgType::kFeedback, payload);
  auto stream = a;
  stream.insert(stream.end(), b.begin(), b.end());
  const auto r1 = parse_message(stream);
  REQUIRE(r1.status == ParseStatus::kOk);
  CHECK(r1.message->type == MsgType::kHeartbeat);
  const auto rest = std::span(stream).subspan(r1.consumed);
  CHECK(std::vector<std::uint8_t>(rest.begin(), rest.end()) == b);
  const auto r2 = parse_message(rest);
  REQUIRE(r2.status == ParseStatus::kOk);
  CHECK(r2.message->payload == payload);
}

TEST_CASE("reader resynchronizes after garbage") {
  const std::vector<std::uint8_t> payload{1, 2};
  const auto good = frame_message(MsgType::kFeedback, payload);
  std::vector<std::uint8_t> stream{'x', 'P', 'A', 'y', 0, 0xFF};
  stream.insert(stream.end(), good.begin(), good.end());
  auto corrupt = good;
  corrupt.back() ^= 1;
  stream.insert(stream.end(), corrupt.begin(), corrupt.end());
  stream.insert(stream.end(), good.begin(), good.end());

  MessageReader reader;
  // Feed one byte at a time to exercise partial buffers.
  std::vector<ParseStatus> seen;
  std::size_t ok = 0;
  for (std::uint8_t byte : stream) {
    reader.feed(std::span(&byte, 1));
    for (auto r = reader.next(); r.status != ParseStatus::kNeedMore; r = reader.next()) {
      seen.push_back(r.status);
      if (r.status == ParseStatus::kOk) {
        CHECK(r.message->payload == payload);
        ++ok;
      }
    }
  }
  CHECK(ok == 2);
  CHECK(std::count(seen.begin(), seen.end(), ParseStatus::kCrcMismatch) == 1);
  CHECK(reader.buffered() < kWireHeaderSize);
}

TEST_CASE("random messages survive arbitrary chunking") {
  testkit::Rng rng(5);
  std::vector<WireMessage> sent;
  std::vector<std::uint8_t> stream;
  for (int i = 0; i < 50; ++i) {
    WireMessage m;
    m.type = static_cast<MsgType>(rng.range(1, 4));
    m.payload.resize(static_cast<std::size_t>(rng.range(0, 300)));
    for (auto& v : m.payload) v = static_cast<std::uint8_t>(rng.range(0, 255));
    const auto bytes = frame_message(m);
    stream.insert(stream.end(), bytes.begin(), bytes.end());
    sent.push_back(std::move(m));
  }
  MessageReader reader;
  std::vector<WireMessage> got;
  std::size_t pos = 0;
  while (pos < stream.size()) {
    const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(rng.range(1, 97)), stream.size() - pos);
    reader.feed(std::span(stream).subspan(pos, n));
    pos += n;
    for (auto r = reader.next(); r.status == ParseStatus::kOk; r = reader.next()) got.push_back(*r.message);
  }
  CHECK(got == sent);
}
