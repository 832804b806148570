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


#include "lisps/fog/node.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <boost/asio/post.hpp>
#include <boost/asio/strand.hpp>
#include <boost/asio/thread_pool.hpp>
#include <map>
#include <stdexcept>

#include "lisps/wire/stream.hpp"

namespace lisps::fog {

Context frame_context(const CameraFeed& feed, Timestamp frame_time, int utc_offset_minutes) {
  Context ctx = feed.context;
  ctx.camera_id = feed.camera_id;
  if (feed.auto_time_class) ctx.time_class = classify_time(frame_time, utc_offset_minutes);
  return ctx;
}

FrameDecision decide_frame(const SuspicionAssessor& assessor, AlertDispatcher& alerts,
                           const Context& ctx, const edge::FrameFeatureSet& frame) {
  FrameDecision d;
  for (const auto& [id, rec] : frame.objects) {
    SuspicionScore s = assessor.assess(rec, ctx, frame.frame_index);
    s.camera_id = frame.camera_id;
    if (auto alert = alerts.dispatch(s, rec, frame.timestamp)) d.alerts.push_back(*alert);
    d.scores.push_back(s);
  }
  return d;
}

std::size_t default_worker_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 1 ? hw - 1 : 1;
}

struct FogNode::Impl {
  using Strand = boost::asio::strand<boost::asio::thread_pool::executor_type>;

  explicit Impl(std::size_t workers) : pool(workers) {}

  boost::asio::thread_pool pool;
  std::map<std::string, Strand> strands;
  std::map<std::string, std::unique_ptr<wire::FeatureClient>> clients;
};

FogNode::FogNode(FogOptions options, std::shared_ptr<const SuspicionAssessor> assessor,
                 std::shared_ptr<AlertDispatcher> alerts, TokenFactory token,
                 const Clock& wall_clock)
    : options_(std::move(options)),
      assessor_(std::move(assessor)),
      alerts_(std::move(alerts)),
      token_(std::move(token)),
      clock_(wall_clock),
      workers_(options_.workers == 0 ? default_worker_count() : options_.workers) {
  if (!assessor_ || !alerts_) throw std::invalid_argument("fog node needs an assessor and alerts");
  persistence_ = std::make_unique<PersistenceWorker>(options_.storage_root,
                                                     options_.utc_offset_minutes);
  impl_ = std::make_unique<Impl>(workers_);
}

FogNode::~FogNode() { stop(); }

void FogNode::add_camera(CameraFeed feed) {
  if (!wire::is_valid_camera_id(feed.camera_id)) {
    throw std::invalid_argument("bad camera id: " + feed.camera_id);
  }
  for (const auto& f : feeds_) {
    if (f.camera_id == feed.camera_id) throw std::invalid_argument("duplicate camera " + f.camera_id);
  }
  feed.context.camera_id = feed.camera_id;
  impl_->strands.emplace(feed.camera_id, boost::asio::make_strand(impl_->pool));
  impl_->clients.emplace(feed.camera_id,
                         std::make_unique<wire::FeatureClient>(feed.edge, options_.read_timeout));
  feeds_.push_back(std::move(feed));
}

void FogNode::set_observer(FrameObserver observer) { observer_ = std::move(observer); }

void FogNode::start() {
  {
    std::lock_guard lock(mu_);
    if (running_) return;
    running_ = true;
  }
  spdlog::info("fog node: {} camera(s), {} worker(s)", feeds_.size(), workers_);
  for (const auto& feed : feeds_) {
    receivers_.emplace_back([this, &feed] { receive_loop(feed); });
  }
}

void FogNode::stop() {
  {
    std::lock_guard lock(mu_);
    running_ = false;
  }
  cv_.notify_all();
  if (impl_) {
    for (auto& [cam, client] : impl_->clients) client->cancel();
  }
  for (auto& t : receivers_) {
    if (t.joinable()) t.join();
  }
  receivers_.clear();
  if (impl_) impl_->pool.join();
  if (persistence_) persistence_->drain();
  if (alerts_) alerts_->flush();
}

void FogNode::receive_loop(const CameraFeed& feed) {
  wire::FeatureClient& client = *impl_->clients.at(feed.camera_id);
  Impl::Strand& strand = impl_->strands.at(feed.camera_id);
  while (true) {
    {
      std::lock_guard lock(mu_);
      if (!running_) return;
    }
    try {
      ++connections_;
      const wire::StreamEnd end = client.fetch(
          feed.camera_id, token_(),
          [&](std::string_view raw) {
            persistence_->submit_raw(feed.camera_id, std::string(raw), clock_.now());
          },
          [&](const wire::FrameAssembler::Block& block) {
            const Timestamp received = clock_.now();
            boost::asio::post(strand, [this, &feed, frame = block.frame, received] {
              decide(feed, frame, received);
            });
            return true;
          });
      if (end.stopped_by_caller) return;
      spdlog::info("fog: stream for {} ended after {} frame(s)", feed.camera_id, end.frames);
    } catch (const wire::AccessDenied& e) {
      spdlog::warn("fog: {} refused the stream for {}: {}", feed.edge.to_string(), feed.camera_id,
                   e.what());
    } catch (const std::exception& e) {
      spdlog::warn("fog: stream for {} failed: {}", feed.camera_id, e.what());
    }
    std::unique_lock lock(mu_);
    cv_.wait_for(lock, options_.reconnect_delay, [&] { return !running_; });
  }
}

FrameReport FogNode::decide(const CameraFeed& feed, const edge::FrameFeatureSet& frame,
                            Timestamp received) {
  const auto t0 = std::chrono::steady_clock::now();
  persistence_->submit_frame(frame);

  FrameReport report;
  report.camera_id = frame.camera_id;
  report.frame_index = frame.frame_index;
  report.frame_time = frame.timestamp;
  report.received = received;

  FrameDecision d = decide_frame(
      *assessor_, *alerts_, frame_context(feed, frame.timestamp, options_.utc_offset_minutes),
      frame);
  report.scores = std::move(d.scores);
  report.alerts = std::move(d.alerts);
  report.decided = clock_.now();
  report.processing_us = std::chrono::duration_cast<std::chrono::microseconds>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
  if (observer_) observer_(report);
  {
    std::lock_guard lock(mu_);
    ++processed_;
  }
  cv_.notify_all();
  return report;
}

bool FogNode::wait_for_frames(std::uint64_t n, std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mu_);
  return cv_.wait_for(lock, timeout, [&] { return processed_.load() >= n; });
}

}  // namespace lisps::fog
