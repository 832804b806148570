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

// Fog-initiated feature streaming over HTTP/1.1 chunked responses.
//
//   GET /stream/features?camera=<id>   X-LISPS-Token required
//   GET /cameras                       newline-separated camera ids
//   GET /video                         fixed placeholder
//
// Each camera has one FrameBroadcaster. The pipeline publishes a frame
// once; it is encoded once and every session writes the same bytes. A
// session starts at the latest published frame and ends when the client
// disconnects; a new request starts a new session.

#ifndef LISPS_WIRE_STREAM_HPP_
#define LISPS_WIRE_STREAM_HPP_

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "lisps/common/net.hpp"
#include "lisps/security/services.hpp"
#include "lisps/wire/codec.hpp"

namespace httplib {
class Server;
class Client;
}  // namespace httplib

namespace lisps::wire {

struct WireFrame {
  std::int64_t frame_index = 0;
  std::string bytes;
};

using EncodedFrame = std::shared_ptr<const WireFrame>;

class FrameBroadcaster {
 public:
  explicit FrameBroadcaster(std::size_t ring_capacity = 4096);

  // Encodes and appends `frame`; returns the shared encoding.
  EncodedFrame publish(const FrameFeatureSet& frame);

  enum class Wait { kFrame, kTimeout, kClosed, kOverrun };

  // Waits for the frame with sequence number `seq` (0-based publish
  // order). kOverrun means it has already left the ring.
  Wait wait(std::uint64_t seq, std::chrono::milliseconds timeout, EncodedFrame* out) const;

  // Sequence number of the latest frame, or of the next one if none has
  // been published.
  std::uint64_t current() const;
  std::uint64_t published() const;

  // Wakes all waiters; later waits return kClosed once drained.
  void close();

 private:
  std::size_t capacity_;
  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  std::deque<EncodedFrame> ring_;
  std::uint64_t first_seq_ = 0;  // seq of ring_.front()
  bool closed_ = false;
};

enum class SessionState { kIdle, kStreaming, kStopped };

struct StreamSession {
  std::uint64_t id = 0;
  std::string peer_vid;
  std::string camera_id;
  SessionState state = SessionState::kIdle;
  std::optional<std::int64_t> last_frame_index;
  std::uint64_t bytes_sent = 0;
};

// Decides whether the raw token header may read `resource`.
using AccessCheck =
    std::function<security::AccessDecision(std::string_view token, std::string_view resource)>;

inline std::string features_resource(std::string_view camera_id) {
  return "camera/" + std::string(camera_id) + "/features";
}

inline constexpr char kVideoPlaceholder[] = "video stream not available\n";

class FeatureServer {
 public:
  FeatureServer(Endpoint listen, AccessCheck check);
  ~FeatureServer();
  FeatureServer(const FeatureServer&) = delete;
  FeatureServer& operator=(const FeatureServer&) = delete;

  // Call before start().
  void add_camera(const std::string& camera_id, std::shared_ptr<FrameBroadcaster> frames);

  // Ends each session once its grant expiry passes on `clock`. Call
  // before start().
  void set_clock(const Clock* clock) { clock_ = clock; }
  int bind();
  void start();
  void stop();
  Endpoint endpoint() const { return {listen_.host, port_}; }

  // Bytes of feature data written to clients across all sessions.
  std::uint64_t feature_bytes_sent() const { return feature_bytes_.load(); }
  std::uint64_t denied_requests() const { return denied_.load(); }
  std::size_t streaming_sessions() const;
  std::vector<StreamSession> sessions() const;

  // Blocks until `n` sessions are streaming at once.
  bool wait_for_sessions(std::size_t n, std::chrono::milliseconds timeout) const;

 private:
  void install_routes();
  void update(std::uint64_t id, const std::function<void(StreamSession&)>& f);

  Endpoint listen_;
  AccessCheck check_;
  const Clock* clock_ = nullptr;
  std::unique_ptr<httplib::Server> server_;
  int port_ = 0;
  std::thread thread_;
  bool started_ = false;
  std::atomic<bool> stopping_{false};

  std::map<std::string, std::shared_ptr<FrameBroadcaster>> cameras_;

  mutable std::mutex sessions_mu_;
  mutable std::condition_variable sessions_cv_;
  std::map<std::uint64_t, StreamSession> sessions_;
  std::uint64_t next_session_ = 1;

  std::atomic<std::uint64_t> feature_bytes_{0};
  std::atomic<std::uint64_t> denied_{0};
};

class ConnectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AccessDenied : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StreamEnd {
  std::uint64_t frames = 0;
  std::uint64_t bytes = 0;
  bool stopped_by_caller = false;
};

class FeatureClient {
 public:
  explicit FeatureClient(Endpoint edge,
                         std::chrono::milliseconds read_timeout = std::chrono::seconds(30));
  ~FeatureClient();

  // Issues the fog-start request for `camera_id` and feeds the stream
  // through a FrameAssembler. `on_raw` sees every received byte in order;
  // `on_frame` sees each complete frame and may return false to stop.
  // Returns when the stream ends. Throws ConnectionError when the edge is
  // unreachable, AccessDenied on refusal, DecodeError on a malformed
  // stream.
  StreamEnd fetch(const std::string& camera_id, const std::string& token,
                  const std::function<void(std::string_view)>& on_raw,
                  const std::function<bool(const FrameAssembler::Block&)>& on_frame);

  std::vector<std::string> cameras();

  // Aborts a fetch running on another thread. Later fetches return at
  // once.
  void cancel();

 private:
  Endpoint edge_;
  std::chrono::milliseconds read_timeout_;
  std::mutex mu_;
  httplib::Client* active_ = nullptr;
  bool cancelled_ = false;
};

}  // namespace lisps::wire

#endif  // LISPS_WIRE_STREAM_HPP_
