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

#include "pnav/live.hpp"

#include <arpa/inet.h>
#include <fmt/format.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "pnav/channel.hpp"
#include "pnav/error.hpp"
#include "pnav/frame.hpp"

namespace pnav {

using Clock = std::chrono::steady_clock;

Socket& Socket::operator=(Socket&& o) noexcept {
  if (this != &o) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = std::exchange(o.fd_, -1);
  }
  return *this;
}

Socket::~Socket() {
  if (fd_ >= 0) ::close(fd_);
}

bool Socket::send_all(std::span<const std::uint8_t> bytes) const {
  while (!bytes.empty()) {
    const ssize_t n = ::send(fd_, bytes.data(), bytes.size(), MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    bytes = bytes.subspan(static_cast<std::size_t>(n));
  }
  return true;
}

void Socket::shutdown() const {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

namespace {

sockaddr_in resolve(const std::string& host, std::uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (host.empty() || host == "0.0.0.0") {
    addr.sin_addr.s_addr = htonl(INADDR_ANY);
  } else if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    addrinfo* res = nullptr;
    if (::getaddrinfo(host.c_str(), nullptr, &hints, &res) != 0 || res == nullptr) {
      throw IoError(fmt::format("cannot resolve host {}", host));
    }
    addr.sin_addr = reinterpret_cast<sockaddr_in*>(res->ai_addr)->sin_addr;
    ::freeaddrinfo(res);
  }
  return addr;
}

}  // namespace

struct LiveServer::Session {
  Socket sock;
  std::thread worker;
  std::atomic<bool> done{false};
};

LiveServer::LiveServer(const LabelSchema& schema, PipelineConfig config, LiveOptions options)
    : schema_(schema), config_(std::move(config)), options_(std::move(options)) {
  config_.mode = DropMode::kLatestWins;
  config_.validate();
}

LiveServer::~LiveServer() { stop(); }

void LiveServer::log(const std::string& msg) const {
  if (options_.log) {
    options_.log(msg);
  } else {
    fmt::print(stderr, "[serve] {}\n", msg);
  }
}

std::uint16_t LiveServer::start() {
  Socket s(::socket(AF_INET, SOCK_STREAM, 0));
  if (!s.valid()) throw IoError(fmt::format("socket: {}", std::strerror(errno)));
  int one = 1;
  ::setsockopt(s.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr = resolve(options_.host, options_.port);
  if (::bind(s.fd(), reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    throw IoError(fmt::format("bind {}:{}: {}", options_.host, options_.port, std::strerror(errno)));
  }
  if (::listen(s.fd(), 8) != 0) throw IoError(fmt::format("listen: {}", std::strerror(errno)));
  socklen_t len = sizeof(addr);
  ::getsockname(s.fd(), reinterpret_cast<sockaddr*>(&addr), &len);
  listener_ = std::move(s);
  acceptor_ = std::thread([this] { accept_loop(); });
  return ntohs(addr.sin_port);
}

void LiveServer::stop() {
  if (stopping_.exchange(true)) return;
  listener_.shutdown();
  if (acceptor_.joinable()) acceptor_.join();
  std::list<std::unique_ptr<Session>> sessions;
  {
    std::lock_guard lock(mu_);
    sessions.swap(sessions_);
  }
  for (auto& s : sessions) s->sock.shutdown();
  for (auto& s : sessions) {
    if (s->worker.joinable()) s->worker.join();
  }
}

void LiveServer::accept_loop() {
  while (!stopping_) {
    pollfd pfd{listener_.fd(), POLLIN, 0};
    const int ready = ::poll(&pfd, 1, 100);
    if (ready <= 0) continue;
    const int fd = ::accept(listener_.fd(), nullptr, nullptr);
    if (fd < 0) {
      if (stopping_) break;
      continue;
    }
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    std::lock_guard lock(mu_);
    // Reap finished sessions.
    for (auto it = sessions_.begin(); it != sessions_.end();) {
      if ((*it)->done) {
        (*it)->worker.join();
        it = sessions_.erase(it);
      } else {
        ++it;
      }
    }
    auto session = std::make_unique<Session>();
    session->sock = Socket(fd);
    Session* raw = session.get();
    ++stats_.sessions;
    sessions_.push_back(std::move(session));
    raw->worker = std::thread([this, raw] { run_session(*raw); });
  }
}

void LiveServer::run_session(Session& s) {
  const std::string schema_doc = schema_.to_json();
  const std::vector<std::uint8_t> schema_bytes(schema_doc.begin(), schema_doc.end());
  LatestSlot<Frame> slot;
  std::atomic<std::uint64_t> received{0};
  std::atomic<std::uint64_t> stream_errors{0};
  std::atomic<std::uint64_t> frame_errors{0};

  // Reader: sole consumer of the inbound direction.
  std::thread reader([&] {
    MessageReader parser;
    std::vector<std::uint8_t> buf(64 * 1024);
    while (true) {
      const ssize_t n = ::recv(s.sock.fd(), buf.data(), buf.size(), 0);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) break;
      parser.feed(std::span(buf.data(), static_cast<std::size_t>(n)));
      while (true) {
        ParseResult r = parser.next();
        if (r.status == ParseStatus::kNeedMore) break;
        if (r.status != ParseStatus::kOk) {
          ++stream_errors;
          log(fmt::format("stream error: {} (skipped {} bytes)", parse_status_name(r.status), r.consumed));
          continue;
        }
        if (r.message->type != MsgType::kFrame) continue;
        try {
          Frame f = decode_frame(r.message->payload);
          ++received;
          slot.put(std::move(f));
        } catch (const DecodeError& e) {
          ++frame_errors;
          log(fmt::format("frame decode error: {}", e.what()));
        }
      }
    }
    slot.close();
  });

  // Worker: processes frames and is the sole writer of the outbound direction.
  FrameProcessor proc(schema_, config_);
  LatencyRecorder recorder(pipeline_stages());
  std::uint64_t processed = 0;
  std::uint64_t heartbeats = 0;
  bool alive = s.sock.send_all(frame_message(MsgType::kSchema, schema_bytes));
  while (alive) {
    Frame frame;
    const auto w = slot.take(frame, options_.heartbeat);
    if (w == LatestSlot<Frame>::Wait::kClosed) break;
    if (w == LatestSlot<Frame>::Wait::kTimeout) {
      alive = s.sock.send_all(frame_message(MsgType::kHeartbeat, {}));
      ++heartbeats;
      continue;
    }
    FrameTiming timing;
    timing.frame_id = frame.frame_id;
    const auto t0 = Clock::now();
    if (config_.stall_us > 0) std::this_thread::sleep_for(std::chrono::microseconds(config_.stall_us));
    try {
      FrameResult r = proc.process(frame, &timing);
      const std::string payload = events_to_jsonl(r.events);
      timing.end_to_end_us = elapsed_us(t0);
      recorder.add(timing);
      ++processed;
      alive = s.sock.send_all(
          frame_message(MsgType::kFeedback, std::span(reinterpret_cast<const std::uint8_t*>(payload.data()),
                                                      payload.size())));
    } catch (const Error& e) {
      ++frame_errors;
      log(fmt::format("frame {} failed: {}", frame.frame_id, e.what()));
    }
  }
  s.sock.shutdown();
  reader.join();
  {
    std::lock_guard lock(mu_);
    stats_.frames_received += received;
    stats_.frames_processed += processed;
    stats_.frames_dropped += slot.drops();
    stats_.stream_errors += stream_errors;
    stats_.frame_errors += frame_errors;
    stats_.heartbeats_sent += heartbeats;
    recorder_.merge(recorder);
  }
  s.done = true;
}

LiveStats LiveServer::stats() const {
  std::lock_guard lock(mu_);
  return stats_;
}

TimingReport LiveServer::timing() const {
  std::lock_guard lock(mu_);
  return recorder_.report(stats_.frames_dropped, stats_.frame_errors);
}

void LiveClient::connect(const std::string& host, std::uint16_t port) {
  Socket s(::socket(AF_INET, SOCK_STREAM, 0));
  if (!s.valid()) throw IoError(fmt::format("socket: {}", std::strerror(errno)));
  sockaddr_in addr = resolve(host, port);
  if (::connect(s.fd(), reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    throw IoError(fmt::format("connect {}:{}: {}", host, port, std::strerror(errno)));
  }
  sock_ = std::move(s);
  reader_ = MessageReader();
}

bool LiveClient::send(MsgType type, std::span<const std::uint8_t> payload) {
  return sock_.send_all(frame_message(type, payload));
}

bool LiveClient::send_raw(std::span<const std::uint8_t> bytes) { return sock_.send_all(bytes); }

std::optional<WireMessage> LiveClient::receive(std::chrono::milliseconds timeout) {
  const auto deadline = Clock::now() + timeout;
  std::vector<std::uint8_t> buf(64 * 1024);
  while (true) {
    ParseResult r = reader_.next();
    if (r.status == ParseStatus::kOk) return std::move(r.message);
    if (r.status != ParseStatus::kNeedMore) continue;
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
    if (left.count() <= 0) return std::nullopt;
    pollfd pfd{sock_.fd(), POLLIN, 0};
    if (::poll(&pfd, 1, static_cast<int>(left.count())) <= 0) return std::nullopt;
    const ssize_t n = ::recv(sock_.fd(), buf.data(), buf.size(), 0);
    if (n <= 0) return std::nullopt;
    reader_.feed(std::span(buf.data(), static_cast<std::size_t>(n)));
  }
}

void LiveClient::close() { sock_ = Socket(); }

}  // namespace pnav
