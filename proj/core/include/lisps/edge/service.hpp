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


#ifndef LISPS_EDGE_SERVICE_HPP_
#define LISPS_EDGE_SERVICE_HPP_

#include <condition_variable>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>

#include "lisps/common/time.hpp"
#include "lisps/edge/pipeline.hpp"

namespace lisps::wire {
class FrameBroadcaster;
class FeatureServer;
}  // namespace lisps::wire

namespace lisps::security {
class HashedIndexRecorder;
}  // namespace lisps::security

namespace lisps::edge {

struct FrameEvent {
  std::string camera_id;
  std::int64_t frame_index = 0;
  Timestamp frame_time;
  Timestamp capture;    // wall clock when processing of the frame began
  Timestamp published;  // wall clock once the encoding was visible to readers
  bool missed_deadline = false;  // not published before the next frame was due
  std::size_t objects = 0;
  std::size_t bytes = 0;
};

struct EdgeRunOptions {
  std::int64_t frames = -1;  // -1: until stopped
  // Streaming sessions to wait for before the first frame; 0 starts at once.
  std::size_t subscribers = 1;
  bool paced = true;  // false runs frames back to back
};

struct EdgeRunStats {
  std::int64_t frames = 0;
  std::int64_t missed_deadlines = 0;
  double seconds = 0.0;  // from the first frame's start to the last's
  double fps() const { return frames > 1 && seconds > 0.0 ? (frames - 1) / seconds : 0.0; }
};

// Drives one camera pipeline at its frame rate and publishes every frame.
class EdgeService {
 public:
  EdgeService(std::unique_ptr<EdgePipeline> pipeline,
              std::shared_ptr<wire::FrameBroadcaster> frames, const Clock& wall_clock);

  const std::string& camera_id() const { return camera_id_; }

  // Optional collaborators; set before run().
  void set_observer(std::function<void(const FrameEvent&)> observer);
  void set_recorder(security::HashedIndexRecorder* recorder) { recorder_ = recorder; }
  void set_server(const wire::FeatureServer* server) { server_ = server; }

  // Runs the frame loop on the calling thread.
  EdgeRunStats run(const EdgeRunOptions& options);
  // Makes run() return after the current frame. Safe from any thread.
  void stop();

 private:
  bool stopping() const;

  std::string camera_id_;
  std::unique_ptr<EdgePipeline> pipeline_;
  std::shared_ptr<wire::FrameBroadcaster> frames_;
  const Clock& clock_;
  std::function<void(const FrameEvent&)> observer_;
  security::HashedIndexRecorder* recorder_ = nullptr;
  const wire::FeatureServer* server_ = nullptr;

  mutable std::mutex mu_;
  std::condition_variable cv_;
  bool stop_ = false;
};

}  // namespace lisps::edge

#endif  // LISPS_EDGE_SERVICE_HPP_
