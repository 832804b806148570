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


#include "lisps/edge/service.hpp"

#include <spdlog/spdlog.h>

#include <chrono>
#include <stdexcept>

#include "lisps/security/recorder.hpp"
#include "lisps/wire/stream.hpp"

namespace lisps::edge {

EdgeService::EdgeService(std::unique_ptr<EdgePipeline> pipeline,
                         std::shared_ptr<wire::FrameBroadcaster> frames, const Clock& wall_clock)
    : pipeline_(std::move(pipeline)), frames_(std::move(frames)), clock_(wall_clock) {
  if (!pipeline_ || !frames_) throw std::invalid_argument("edge service needs a pipeline and frames");
  camera_id_ = pipeline_->state().camera_id;
}

void EdgeService::set_observer(std::function<void(const FrameEvent&)> observer) {
  observer_ = std::move(observer);
}

void EdgeService::stop() {
  {
    std::lock_guard lock(mu_);
    stop_ = true;
  }
  cv_.notify_all();
}

bool EdgeService::stopping() const {
  std::lock_guard lock(mu_);
  return stop_;
}

EdgeRunStats EdgeService::run(const EdgeRunOptions& options) {
  using Clock = std::chrono::steady_clock;
  EdgeRunStats stats;

  if (server_ != nullptr && options.subscribers > 0) {
    spdlog::info("edge {}: waiting for {} subscriber(s)", camera_id_, options.subscribers);
    while (!stopping() &&
           !server_->wait_for_sessions(options.subscribers, std::chrono::milliseconds(200))) {
    }
  }

  const auto period = std::chrono::duration_cast<Clock::duration>(
      std::chrono::duration<double>(1.0 / pipeline_->config().frame_rate));
  const auto start = Clock::now();
  Clock::time_point first = start;
  Clock::time_point last = start;
  std::int64_t i = 0;
  for (; options.frames < 0 || i < options.frames; ++i) {
    if (stopping()) break;
    const auto due = start + period * i;
    if (options.paced) {
      std::unique_lock lock(mu_);
      if (cv_.wait_until(lock, due, [&] { return stop_; })) break;
    }

    last = Clock::now();
    if (i == 0) first = last;
    FrameEvent ev;
    ev.camera_id = camera_id_;
    ev.frame_index = i;
    ev.capture = clock_.now();
    const FrameResult r = pipeline_->step(i);
    const wire::EncodedFrame encoded = frames_->publish(r.features);
    ev.published = clock_.now();
    ev.frame_time = r.features.timestamp;
    ev.objects = r.features.objects.size();
    ev.bytes = encoded->bytes.size();
    ev.missed_deadline = options.paced && Clock::now() > due + period;
    stats.missed_deadlines += ev.missed_deadline;

    if (recorder_ != nullptr) recorder_->enqueue(camera_id_, i, encoded->bytes);
    if (observer_) observer_(ev);
  }
  stats.frames = i;
  stats.seconds = std::chrono::duration<double>(last - first).count();
  return stats;
}

}  // namespace lisps::edge
