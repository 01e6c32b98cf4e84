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

#include "doctest.h"
#include "pnav/live.hpp"
#include "pnav/synth.hpp"
#include "support/testkit.hpp"

using namespace pnav;
using namespace std::chrono_literals;

namespace {

std::vector<Frame> walk(std::size_t n) {
  WalkConfig wc;
  wc.width = 64;
  wc.height = 48;
  wc.frames = n;
  return synthesize_walk(wc, default_schema());
}

// First walk frame that yields at least one feedback event on a fresh processor.
Frame frame_with_events() {
  for (const Frame& f : walk(40)) {
    FrameProcessor proc(default_schema(), PipelineConfig{});
    if (!proc.process(f).events.empty()) return f;
  }
  FAIL("no frame with events");
  return {};
}

LiveOptions quiet(std::chrono::milliseconds heartbeat = 1000ms) {
  LiveOptions o;
  o.heartbeat = heartbeat;
  o.log = [](const std::string&) {};
  return o;
}

std::vector<WireMessage> drain(LiveClient& c, MsgType type, std::size_t want, std::chrono::milliseconds limit) {
  std::vector<WireMessage> got;
  const auto deadline = std::chrono::steady_clock::now() + limit;
  while (got.size() < want && std::chrono::steady_clock::now() < deadline) {
    auto m = c.receive(100ms);
    if (m && m->type == type) got.push_back(std::move(*m));
  }
  return got;
}

}  // namespace

TEST_CASE("session greets with the schema and answers frames") {
  LiveServer server(default_schema(), PipelineConfig{}, quiet());
  const auto port = server.start();
  LiveClient c;
  c.connect("127.0.0.1", port);
  auto hello = c.receive(2000ms);
  REQUIRE(hello);
  CHECK(hello->type == MsgType::kSchema);
  CHECK(std::string(hello->payload.begin(), hello->payload.end()) == default_schema().to_json());

  const auto frames = walk(3);
  for (const Frame& f : frames) {
    const auto bytes = encode_frame(f);
    CHECK(c.send(MsgType::kFrame, bytes));
    // One at a time so nothing is replaced in the slot.
    CHECK(drain(c, MsgType::kFeedback, 1, 5000ms).size() == 1);
  }
  c.close();
  server.stop();
  const LiveStats st = server.stats();
  CHECK(st.sessions == 1);
  CHECK(st.frames_received == 3);
  CHECK(st.frames_processed == 3);
  CHECK(st.frames_dropped == 0);
  CHECK(server.timing().end_to_end.count == 3);
}

TEST_CASE("burst sends at most one feedback per frame") {
  PipelineConfig cfg;
  cfg.stall_us = 50'000;
  LiveServer server(default_schema(), cfg, quiet());
  const auto port = server.start();
  LiveClient c;
  c.connect("127.0.0.1", port);
  for (const Frame& f : walk(6)) c.send(MsgType::kFrame, encode_frame(f));
  const auto got = drain(c, MsgType::kFeedback, 6, 1500ms);
  CHECK(got.size() >= 1);
  CHECK(got.size() <= 6);
  c.close();
  server.stop();
  const LiveStats st = server.stats();
  CHECK(st.frames_received == 6);
  CHECK(st.frames_processed + st.frames_dropped == 6);
  CHECK(st.frames_processed == got.size());
}

TEST_CASE("idle sessions receive heartbeats") {
  LiveServer server(default_schema(), PipelineConfig{}, quiet(50ms));
  const auto port = server.start();
  LiveClient c;
  c.connect("127.0.0.1", port);
  CHECK(drain(c, MsgType::kHeartbeat, 2, 3000ms).size() == 2);
  c.close();
  server.stop();
  CHECK(server.stats().heartbeats_sent >= 2);
}

TEST_CASE("garbage is skipped and the connection survives") {
  LiveServer server(default_schema(), PipelineConfig{}, quiet());
  const auto port = server.start();
  LiveClient c;
  c.connect("127.0.0.1", port);
  const std::vector<std::uint8_t> junk{'P', 'A', 'N', 'O', 9, 9, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14};
  CHECK(c.send_raw(junk));
  auto corrupt = frame_message(MsgType::kFrame, encode_frame(walk(1)[0]));
  corrupt[20] ^= 0xFF;
  CHECK(c.send_raw(corrupt));
  const std::vector<std::uint8_t> not_a_frame{1, 2, 3};
  CHECK(c.send(MsgType::kFrame, not_a_frame));  // well framed, undecodable
  CHECK(c.send(MsgType::kFrame, encode_frame(walk(1)[0])));
  CHECK(drain(c, MsgType::kFeedback, 1, 5000ms).size() == 1);
  c.close();
  server.stop();
  const LiveStats st = server.stats();
  CHECK(st.stream_errors >= 2);
  CHECK(st.frame_errors == 1);
  CHECK(st.frames_processed == 1);
}

TEST_CASE("each connection has its own feedback state") {
  const Frame f = frame_with_events();
  const auto bytes = encode_frame(f);
  LiveServer server(default_schema(), PipelineConfig{}, quiet());
  const auto port = server.start();

  std::vector<std::string> first_answers;
  for (int client = 0; client < 2; ++client) {
    LiveClient c;
    c.connect("127.0.0.1", port);
    c.send(MsgType::kFrame, bytes);
    auto a = drain(c, MsgType::kFeedback, 1, 5000ms);
    REQUIRE(a.size() == 1);
    first_answers.emplace_back(a[0].payload.begin(), a[0].payload.end());
    // Same frame again on the same connection: everything is a repeat.
    c.send(MsgType::kFrame, bytes);
    auto b = drain(c, MsgType::kFeedback, 1, 5000ms);
    REQUIRE(b.size() == 1);
    CHECK(b[0].payload.empty());
    c.close();
  }
  CHECK_FALSE(first_answers[0].empty());
  CHECK(first_answers[0] == first_answers[1]);
  server.stop();
  CHECK(server.stats().sessions == 2);
}
