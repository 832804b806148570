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


#include "lisps/security/recorder.hpp"

#include <spdlog/spdlog.h>

#include <optional>

#include "lisps/ledger/contracts.hpp"

namespace lisps::security {

HashedIndexRecorder::HashedIndexRecorder(SecurityServices& services, ledger::KeyPair recorder,
                                         std::int64_t every)
    : services_(services), key_(std::move(recorder)), every_(every) {
  thread_ = std::thread([this] { run(); });
}

HashedIndexRecorder::~HashedIndexRecorder() { stop(); }

bool HashedIndexRecorder::wants(std::int64_t frame_index) const {
  return every_ > 0 && frame_index % every_ == 0;
}

void HashedIndexRecorder::enqueue(std::string_view camera_id, std::int64_t frame_index,
                                  std::string bytes) {
  if (!wants(frame_index)) return;
  {
    std::lock_guard lock(mu_);
    if (stop_) return;
    jobs_.push_back({ledger::hia_key(camera_id, frame_index), std::move(bytes)});
  }
  cv_.notify_one();
}

bool HashedIndexRecorder::drain(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mu_);
  return idle_cv_.wait_for(lock, timeout, [&] { return jobs_.empty() && !busy_; });
}

void HashedIndexRecorder::stop() {
  {
    std::lock_guard lock(mu_);
    stop_ = true;
  }
  cv_.notify_all();
  if (thread_.joinable()) thread_.join();
}

std::uint64_t HashedIndexRecorder::accepted() const {
  std::lock_guard lock(mu_);
  return accepted_;
}

std::uint64_t HashedIndexRecorder::rejected() const {
  std::lock_guard lock(mu_);
  return rejected_;
}

void HashedIndexRecorder::run() {
  std::unique_lock lock(mu_);
  while (true) {
    cv_.wait(lock, [&] { return stop_ || !jobs_.empty(); });
    if (jobs_.empty()) return;
    Job job = std::move(jobs_.front());
    jobs_.pop_front();
    busy_ = true;
    lock.unlock();

    bool ok = false;
    bool done = false;
    std::optional<ledger::Transaction> tx;
    while (!done) {
      try {
        if (!tx) {
          tx = services_.sign_next(key_, "hia", "record",
                                   ledger::hia_record_args(job.key, ledger::sha256(job.bytes)));
        }
        const ledger::SubmitResult r = services_.submit_signed(*tx);
        if (!r.accepted) spdlog::warn("hia record {} rejected: {}", job.key, r.error);
        ok = r.accepted;
        done = true;
      } catch (const LedgerUnavailable& e) {
        std::unique_lock wait_lock(mu_);
        if (stop_) {
          spdlog::warn("hia record {} abandoned: {}", job.key, e.what());
          done = true;
        } else {
          cv_.wait_for(wait_lock, std::chrono::milliseconds(100), [&] { return stop_; });
        }
      }
    }

    lock.lock();
    ++(ok ? accepted_ : rejected_);
    busy_ = false;
    if (jobs_.empty()) idle_cv_.notify_all();
  }
}

}  // namespace lisps::security
