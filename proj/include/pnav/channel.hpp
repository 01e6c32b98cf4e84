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

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <deque>
#include <mutex>
#include <optional>

namespace pnav {

// Blocking FIFO with a fixed capacity; producers wait when full.
template <typename T>
class BoundedQueue {
 public:
  explicit BoundedQueue(std::size_t capacity) : capacity_(capacity) {}

  // Returns false if the queue was closed.
  bool push(T value) {
    std::unique_lock lock(mu_);
    not_full_.wait(lock, [&] { return closed_ || items_.size() < capacity_; });
    if (closed_) return false;
    items_.push_back(std::move(value));
    not_empty_.notify_one();
    return true;
  }

  // Empty optional once closed and drained.
  std::optional<T> pop() {
    std::unique_lock lock(mu_);
    not_empty_.wait(lock, [&] { return closed_ || !items_.empty(); });
    if (items_.empty()) return std::nullopt;
    T v = std::move(items_.front());
    items_.pop_front();
    not_full_.notify_one();
    return v;
  }

  void close() {
    std::lock_guard lock(mu_);
    closed_ = true;
    not_empty_.notify_all();
    not_full_.notify_all();
  }

 private:
  std::size_t capacity_;
  std::mutex mu_;
  std::condition_variable not_empty_;
  std::condition_variable not_full_;
  std::deque<T> items_;
  bool closed_ = false;
};

// Capacity-1 hand-off where a newer value replaces a waiting one.
template <typename T>
class LatestSlot {
 public:
  // Returns true if a waiting value was replaced (dropped).
  bool put(T value) {
    std::lock_guard lock(mu_);
    const bool dropped = value_.has_value();
    if (dropped) ++drops_;
    value_ = std::move(value);
    cv_.notify_one();
    return dropped;
  }

  enum class Wait { kValue, kTimeout, kClosed };

  // Waits up to `timeout` for a value.
  template <typename Rep, typename Period>
  Wait take(T& out, std::chrono::duration<Rep, Period> timeout) {
    std::unique_lock lock(mu_);
    if (!cv_.wait_for(lock, timeout, [&] { return closed_ || value_.has_value(); })) return Wait::kTimeout;
    if (value_) {
      out = std::move(*value_);
      value_.reset();
      return Wait::kValue;
    }
    return Wait::kClosed;
  }

  void close() {
    std::lock_guard lock(mu_);
    closed_ = true;
    cv_.notify_all();
  }

  std::size_t drops() const {
    std::lock_guard lock(mu_);
    return drops_;
  }

 private:
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::optional<T> value_;
  std::size_t drops_ = 0;
  bool closed_ = false;
};

}  // namespace pnav
