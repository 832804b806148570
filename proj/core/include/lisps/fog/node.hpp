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


// The fog service: pulls feature streams from edge nodes and runs each
// frame through contextualization, scoring and alert dispatch.

#ifndef LISPS_FOG_NODE_HPP_
#define LISPS_FOG_NODE_HPP_

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "lisps/common/net.hpp"
#include "lisps/common/time.hpp"
#include "lisps/edge/tracker.hpp"
#include "lisps/fog/alerts.hpp"
#include "lisps/fog/assessor.hpp"
#include "lisps/fog/persist.hpp"

namespace lisps::fog {

struct CameraFeed {
  std::string camera_id;
  Endpoint edge;
  Context context;
  // Derive the time class from each frame's capture time instead of using
  // context.time_class.
  bool auto_time_class = true;
};

// Context for one frame of `feed`.
Context frame_context(const CameraFeed& feed, Timestamp frame_time, int utc_offset_minutes);

struct FrameDecision {
  std::vector<SuspicionScore> scores;
  std::vector<Alert> alerts;
};

// Scores every object of `frame` and dispatches the alerts.
FrameDecision decide_frame(const SuspicionAssessor& assessor, AlertDispatcher& alerts,
                           const Context& ctx, const edge::FrameFeatureSet& frame);

struct FrameReport {
  std::string camera_id;
  std::int64_t frame_index = 0;
  Timestamp frame_time;
  Timestamp received;  // wall clock when the frame was reassembled
  Timestamp decided;   // wall clock after every alert was handed to its sink
  std::int64_t processing_us = 0;
  std::vector<SuspicionScore> scores;
  std::vector<Alert> alerts;
};

// Hardware threads minus one, at least one.
std::size_t default_worker_count();

struct FogOptions {
  std::filesystem::path storage_root;
  int utc_offset_minutes = 0;
  std::size_t workers = 0;  // 0: default_worker_count()
  std::chrono::milliseconds reconnect_delay{500};
  std::chrono::milliseconds read_timeout{30'000};
};

// Produces a fresh X-LISPS-Token value for each stream request.
using TokenFactory = std::function<std::string()>;
// Called on the camera's worker after each frame; must be thread-safe
// across cameras.
using FrameObserver = std::function<void(const FrameReport&)>;

class FogNode {
 public:
  FogNode(FogOptions options, std::shared_ptr<const SuspicionAssessor> assessor,
          std::shared_ptr<AlertDispatcher> alerts, TokenFactory token,
          const Clock& wall_clock);
  ~FogNode();

  FogNode(const FogNode&) = delete;
  FogNode& operator=(const FogNode&) = delete;

  // Both must be called before start().
  void add_camera(CameraFeed feed);
  void set_observer(FrameObserver observer);

  // Opens one stream per camera and reconnects after each loss.
  void start();
  // Cancels the streams, finishes queued frames and flushes storage.
  void stop();

  // Scores one frame on the calling thread. Frames of one camera must be
  // passed in order.
  FrameReport decide(const CameraFeed& feed, const edge::FrameFeatureSet& frame,
                     Timestamp received);

  std::size_t workers() const { return workers_; }
  std::uint64_t frames_processed() const { return processed_.load(); }
  std::uint64_t connections() const { return connections_.load(); }
  bool wait_for_frames(std::uint64_t n, std::chrono::milliseconds timeout) const;

 private:
  struct Impl;
  void receive_loop(const CameraFeed& feed);

  FogOptions options_;
  std::shared_ptr<const SuspicionAssessor> assessor_;
  std::shared_ptr<AlertDispatcher> alerts_;
  TokenFactory token_;
  const Clock& clock_;
  std::size_t workers_;
  FrameObserver observer_;
  std::vector<CameraFeed> feeds_;
  std::unique_ptr<PersistenceWorker> persistence_;
  std::unique_ptr<Impl> impl_;
  std::vector<std::thread> receivers_;

  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  bool running_ = false;
  std::atomic<std::uint64_t> processed_{0};
  std::atomic<std::uint64_t> connections_{0};
};

}  // namespace lisps::fog

#endif  // LISPS_FOG_NODE_HPP_
