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

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "pnav/pipeline.hpp"
#include "pnav/wire.hpp"

namespace pnav {

// Owning POSIX socket descriptor.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  Socket(Socket&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
  Socket& operator=(Socket&& o) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  ~Socket();

  int fd() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  // Sends everything or returns false.
  bool send_all(std::span<const std::uint8_t> bytes) const;
  // Shuts down both directions without closing the descriptor.
  void shutdown() const;

 private:
  int fd_ = -1;
};

struct LiveOptions {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;  // 0 = pick a free port
  std::chrono::milliseconds heartbeat{1000};
  std::function<void(const std::string&)> log;  // defaults to stderr
};

struct LiveStats {
  std::uint64_t sessions = 0;
  std::uint64_t frames_received = 0;
  std::uint64_t frames_processed = 0;
  std::uint64_t frames_dropped = 0;
  std::uint64_t stream_errors = 0;  // framing / CRC errors (resynchronized)
  std::uint64_t frame_errors = 0;   // decode or processing failures
  std::uint64_t heartbeats_sent = 0;
};

// TCP server: on connect it sends the SCHEMA message, then every decoded
// FRAME goes through a latest-wins hand-off into a per-connection
// FrameProcessor, and each processed frame is answered with one FEEDBACK
// message (JSON lines). HEARTBEAT is sent after each idle interval.
class LiveServer {
 public:
  LiveServer(const LabelSchema& schema, PipelineConfig config, LiveOptions options = {});
  ~LiveServer();
  LiveServer(const LiveServer&) = delete;
  LiveServer& operator=(const LiveServer&) = delete;

  // Binds and starts accepting. Returns the bound port. Throws IoError.
  std::uint16_t start();
  void stop();

  LiveStats stats() const;
  TimingReport timing() const;

 private:
  struct Session;
  void accept_loop();
  void run_session(Session& s);
  void log(const std::string& msg) const;

  const LabelSchema& schema_;
  PipelineConfig config_;
  LiveOptions options_;
  Socket listener_;
  std::thread acceptor_;
  std::atomic<bool> stopping_{false};
  mutable std::mutex mu_;
  std::list<std::unique_ptr<Session>> sessions_;
  LiveStats stats_;
  LatencyRecorder recorder_{pipeline_stages()};
};

// Minimal blocking client, used by tests and tools.
class LiveClient {
 public:
  // Throws IoError when the connection fails.
  void connect(const std::string& host, std::uint16_t port);
  bool send(MsgType type, std::span<const std::uint8_t> payload);
  bool send_raw(std::span<const std::uint8_t> bytes);
  // Next well-formed message, or nullopt on timeout / disconnect.
  std::optional<WireMessage> receive(std::chrono::milliseconds timeout);
  void close();

 private:
  Socket sock_;
  MessageReader reader_;
};

}  // namespace pnav
