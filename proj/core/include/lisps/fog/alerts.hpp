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

#ifndef LISPS_FOG_ALERTS_HPP_
#define LISPS_FOG_ALERTS_HPP_

#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "lisps/common/time.hpp"
#include "lisps/edge/tracker.hpp"
#include "lisps/fog/assessor.hpp"

namespace lisps::fog {

struct Alert {
  std::string camera_id;
  ObjectId object_id;
  std::int64_t frame_index = 0;
  double score = 0.0;
  edge::FeatureRecord features;
  Timestamp time;  // capture time of the triggering frame
  std::string receiver;
};

// ALERT <iso8601> cam=<id> obj=<id.3dp> frame=<idx> score=<v.3dp>
//   speed=<v.3dp> dirch=<int> dwell=<v.3dp>
// on one line, without the trailing LF.
std::string format_alert(const Alert& a);

class AlertSink {
 public:
  virtual ~AlertSink() = default;
  // Throws on delivery failure.
  virtual void deliver(const Alert& alert) = 0;
};

// Appends one line per alert and flushes.
class FileAlertSink final : public AlertSink {
 public:
  explicit FileAlertSink(std::filesystem::path path);
  void deliver(const Alert& alert) override;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::mutex mu_;
};

// Keeps delivered alerts in memory.
class MemoryAlertSink final : public AlertSink {
 public:
  void deliver(const Alert& alert) override;
  std::vector<Alert> alerts() const;

 private:
  mutable std::mutex mu_;
  std::vector<Alert> alerts_;
};

// POSTs the alert line to http://host:port/path.
class WebhookAlertSink final : public AlertSink {
 public:
  explicit WebhookAlertSink(std::string url, int timeout_ms = 2000);
  void deliver(const Alert& alert) override;

 private:
  std::string origin_;
  std::string path_;
  int timeout_ms_;
};

class AlertDispatcher {
 public:
  // Threshold must lie in (0, 1); cooldown is per (camera, object).
  AlertDispatcher(double threshold, std::int64_t cooldown_ms);

  // The single designated receiver for a camera. Camera "*" is the
  // fallback for cameras without their own receiver.
  void set_receiver(const std::string& camera_id, std::string receiver,
                    std::shared_ptr<AlertSink> sink);

  // Emits an alert iff score > threshold and the object is outside its
  // cooldown window. Undeliverable alerts are queued and retried in order
  // on later calls and on flush(). Throws std::logic_error when the camera
  // has no receiver.
  std::optional<Alert> dispatch(const SuspicionScore& score, const edge::FeatureRecord& rec,
                                Timestamp frame_time);

  // Retries queued alerts; returns how many remain queued.
  std::size_t flush();
  std::size_t pending() const;

  double threshold() const { return threshold_; }
  std::int64_t cooldown_ms() const { return cooldown_ms_; }

 private:
  struct Receiver {
    std::string id;
    std::shared_ptr<AlertSink> sink;
    std::deque<Alert> queue;
  };

  Receiver& receiver_for(const std::string& camera_id);
  static void drain(Receiver& r);

  double threshold_;
  std::int64_t cooldown_ms_;
  mutable std::mutex mu_;
  std::map<std::string, Receiver> receivers_;
  std::map<std::pair<std::string, ObjectId>, Timestamp> last_alert_;
};

}  // namespace lisps::fog

#endif  // LISPS_FOG_ALERTS_HPP_
