// Copyright 2026 The LISPS Authors. All Rights Reserved.
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


#ifndef LISPS_SECURITY_RECORDER_HPP_
#define LISPS_SECURITY_RECORDER_HPP_

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>

#include "lisps/ledger/crypto.hpp"
#include "lisps/security/services.hpp"

namespace lisps::security {

// Background hashed-index recording for a frame source. Each queued frame
// becomes one hia.record transaction; submissions that fail because the
// ledger is unreachable are resent until they are accepted or the recorder
// stops.
class HashedIndexRecorder {
 public:
  // Records frames whose index is a multiple of `every`; 0 disables.
  HashedIndexRecorder(SecurityServices& services, ledger::KeyPair recorder,
                      std::int64_t every = 1);
  ~HashedIndexRecorder();

  HashedIndexRecorder(const HashedIndexRecorder&) = delete;
  HashedIndexRecorder& operator=(const HashedIndexRecorder&) = delete;

  bool wants(std::int64_t frame_index) const;
  void enqueue(std::string_view camera_id, std::int64_t frame_index, std::string bytes);

  // Blocks until every queued frame was submitted; false on timeout.
  bool drain(std::chrono::milliseconds timeout);
  void stop();

  std::uint64_t accepted() const;
  std::uint64_t rejected() const;

 private:
  struct Job {
    std::string key;
    std::string bytes;
  };
  void run();

  SecurityServices& services_;
  ledger::KeyPair key_;
  std::int64_t every_;

  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::condition_variable idle_cv_;
  std::deque<Job> jobs_;
  bool busy_ = false;
  bool stop_ = false;
  std::uint64_t accepted_ = 0;
  std::uint64_t rejected_ = 0;
  std::thread thread_;
};

}  // namespace lisps::security

#endif  // LISPS_SECURITY_RECORDER_HPP_
