// Copyright 2026 The Epiaudit Authors.
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
#include <map>
#include <mutex>
#include <string>
#include <thread>

namespace epiaudit {

// Per-host politeness: any two request slots handed out for the same host are
// at least `interval` apart. Slots are reserved under the lock and slept on
// outside it, so distinct hosts never wait on each other.
class RateLimiter {
 public:
  using Clock = std::chrono::steady_clock;

  explicit RateLimiter(std::chrono::milliseconds interval) : interval_(interval) {}

  // Blocks until the caller may issue a request to `host`.
  void acquire(const std::string& host) {
    Clock::time_point slot;
    {
      std::lock_guard lock(mutex_);
      const auto now = Clock::now();
      auto it = last_.find(host);
      slot = (it == last_.end()) ? now : std::max(now, it->second + interval_);
      last_[host] = slot;
    }
    std::this_thread::sleep_until(slot);
  }

  std::chrono::milliseconds interval() const { return interval_; }

 private:
  std::chrono::milliseconds interval_;
  std::mutex mutex_;
  std::map<std::string, Clock::time_point> last_;
};

}  // namespace epiaudit
