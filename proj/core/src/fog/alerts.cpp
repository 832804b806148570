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

#include "lisps/fog/alerts.hpp"

#include <fmt/format.h>
#include <httplib.h>
#include <spdlog/spdlog.h>

#include <cerrno>
#include <cstdio>
#include <stdexcept>
#include <system_error>

#include "lisps/wire/codec.hpp"

namespace lisps::fog {

std::string format_alert(const Alert& a) {
  return fmt::format("ALERT {} cam={} obj={} frame={} score={} speed={} dirch={} dwell={}",
                     format_iso8601(a.time), a.camera_id, format_seconds(a.object_id),
                     a.frame_index, wire::format_real(a.score), wire::format_real(a.features.speed),
                     a.features.direction_changes, wire::format_real(a.features.dwell));
}

FileAlertSink::FileAlertSink(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
}

void FileAlertSink::deliver(const Alert& alert) {
  const std::string line = format_alert(alert) + "\n";
  std::lock_guard lock(mu_);
  std::FILE* f = std::fopen(path_.c_str(), "ab");
  if (f == nullptr) throw std::system_error(errno, std::generic_category(), path_.string());
  const bool ok = std::fwrite(line.data(), 1, line.size(), f) == line.size();
  const bool flushed = std::fflush(f) == 0;
  const int err = errno;
  std::fclose(f);
  if (!ok || !flushed) throw std::system_error(err, std::generic_category(), path_.string());
}

void MemoryAlertSink::deliver(const Alert& alert) {
  std::lock_guard lock(mu_);
  alerts_.push_back(alert);
}

std::vector<Alert> MemoryAlertSink::alerts() const {
  std::lock_guard lock(mu_);
  return alerts_;
}

WebhookAlertSink::WebhookAlertSink(std::string url, int timeout_ms) : timeout_ms_(timeout_ms) {
  constexpr std::string_view kScheme = "http://";
  if (url.rfind(kScheme, 0) != 0) throw std::invalid_argument("webhook url must be http://");
  const auto slash = url.find('/', kScheme.size());
  origin_ = url.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : url.substr(slash);
}

void WebhookAlertSink::deliver(const Alert& alert) {
  httplib::Client cli(origin_);
  const auto t = std::chrono::milliseconds(timeout_ms_);
  cli.set_connection_timeout(t);
  cli.set_read_timeout(t);
  cli.set_write_timeout(t);
  auto res = cli.Post(path_, format_alert(alert) + "\n", "text/plain");
  if (!res) throw std::runtime_error("webhook: " + httplib::to_string(res.error()));
  if (res->status < 200 || res->status >= 300) {
    throw std::runtime_error("webhook: HTTP " + std::to_string(res->status));
  }
}

AlertDispatcher::AlertDispatcher(double threshold, std::int64_t cooldown_ms)
    : threshold_(threshold), cooldown_ms_(cooldown_ms) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw std::invalid_argument("alert threshold must lie in (0, 1)");
  }
  if (cooldown_ms < 0) throw std::invalid_argument("cooldown must be non-negative");
}

void AlertDispatcher::set_receiver(const std::string& camera_id, std::string receiver,
                                   std::shared_ptr<AlertSink> sink) {
  if (!sink) throw std::invalid_argument("receiver needs a sink");
  std::lock_guard lock(mu_);
  Receiver& r = receivers_[camera_id];
  r.id = std::move(receiver);
  r.sink = std::move(sink);
}

AlertDispatcher::Receiver& AlertDispatcher::receiver_for(const std::string& camera_id) {
  auto it = receivers_.find(camera_id);
  if (it == receivers_.end()) it = receivers_.find("*");
  if (it == receivers_.end()) {
    throw std::logic_error("no designated receiver for camera " + camera_id);
  }
  return it->second;
}

void AlertDispatcher::drain(Receiver& r) {
  while (!r.queue.empty()) {
    try {
      r.sink->deliver(r.queue.front());
    } catch (const std::exception& e) {
      spdlog::warn("alert delivery to {} failed, {} queued: {}", r.id, r.queue.size(), e.what());
      return;
    }
    r.queue.pop_front();
  }
}

std::optional<Alert> AlertDispatcher::dispatch(const SuspicionScore& score,
                                               const edge::FeatureRecord& rec,
                                               Timestamp frame_time) {
  if (!(score.score > threshold_)) return std::nullopt;
  std::lock_guard lock(mu_);
  Receiver& r = receiver_for(score.camera_id);

  const auto key = std::make_pair(score.camera_id, score.object_id);
  auto last = last_alert_.find(key);
  if (last != last_alert_.end() && frame_time.ms - last->second.ms < cooldown_ms_) {
    return std::nullopt;
  }
  last_alert_[key] = frame_time;

  Alert a{score.camera_id, score.object_id, score.frame_index, score.score, rec, frame_time, r.id};
  r.queue.push_back(a);
  drain(r);
  return a;
}

std::size_t AlertDispatcher::flush() {
  std::lock_guard lock(mu_);
  std::size_t left = 0;
  for (auto& [cam, r] : receivers_) {
    drain(r);
    left += r.queue.size();
  }
  return left;
}

std::size_t AlertDispatcher::pending() const {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (const auto& [cam, r] : receivers_) n += r.queue.size();
  return n;
}

}  // namespace lisps::fog
