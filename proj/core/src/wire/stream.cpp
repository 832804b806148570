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

#include "lisps/wire/stream.hpp"

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "lisps/common/time.hpp"

namespace lisps::wire {

FrameBroadcaster::FrameBroadcaster(std::size_t ring_capacity)
    : capacity_(std::max<std::size_t>(ring_capacity, 1)) {}

EncodedFrame FrameBroadcaster::publish(const FrameFeatureSet& frame) {
  auto bytes = std::make_shared<const WireFrame>(WireFrame{frame.frame_index, encode_frame(frame)});
  {
    std::lock_guard lock(mu_);
    ring_.push_back(bytes);
    if (ring_.size() > capacity_) {
      ring_.pop_front();
      ++first_seq_;
    }
  }
  cv_.notify_all();
  return bytes;
}

FrameBroadcaster::Wait FrameBroadcaster::wait(std::uint64_t seq, std::chrono::milliseconds timeout,
                                              EncodedFrame* out) const {
  std::unique_lock lock(mu_);
  const bool ready = cv_.wait_for(lock, timeout, [&] {
    return closed_ || seq < first_seq_ + ring_.size();
  });
  if (seq < first_seq_) return Wait::kOverrun;
  if (seq < first_seq_ + ring_.size()) {
    *out = ring_[seq - first_seq_];
    return Wait::kFrame;
  }
  return ready ? Wait::kClosed : Wait::kTimeout;
}

std::uint64_t FrameBroadcaster::current() const {
  std::lock_guard lock(mu_);
  const std::uint64_t next = first_seq_ + ring_.size();
  return next == 0 ? 0 : next - 1;
}

std::uint64_t FrameBroadcaster::published() const {
  std::lock_guard lock(mu_);
  return first_seq_ + ring_.size();
}

void FrameBroadcaster::close() {
  {
    std::lock_guard lock(mu_);
    closed_ = true;
  }
  cv_.notify_all();
}

FeatureServer::FeatureServer(Endpoint listen, AccessCheck check)
    : listen_(std::move(listen)),
      check_(std::move(check)),
      server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

FeatureServer::~FeatureServer() { stop(); }

void FeatureServer::add_camera(const std::string& camera_id,
                               std::shared_ptr<FrameBroadcaster> frames) {
  if (!is_valid_camera_id(camera_id)) throw std::invalid_argument("bad camera id: " + camera_id);
  cameras_[camera_id] = std::move(frames);
}

int FeatureServer::bind() {
  if (port_ > 0) return port_;
  if (listen_.port == 0) {
    port_ = server_->bind_to_any_port(listen_.host);
  } else if (server_->bind_to_port(listen_.host, listen_.port)) {
    port_ = listen_.port;
  } else {
    port_ = -1;
  }
  if (port_ < 0) {
    port_ = 0;
    throw std::runtime_error("feature server: cannot bind " + listen_.to_string());
  }
  return port_;
}

void FeatureServer::start() {
  bind();
  started_ = true;
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void FeatureServer::stop() {
  stopping_ = true;
  sessions_cv_.notify_all();
  // httplib only closes the socket of a running server.
  if (port_ > 0 && !started_) start();
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

std::size_t FeatureServer::streaming_sessions() const {
  std::lock_guard lock(sessions_mu_);
  std::size_t n = 0;
  for (const auto& [id, s] : sessions_) n += s.state == SessionState::kStreaming;
  return n;
}

std::vector<StreamSession> FeatureServer::sessions() const {
  std::lock_guard lock(sessions_mu_);
  std::vector<StreamSession> out;
  for (const auto& [id, s] : sessions_) out.push_back(s);
  return out;
}

bool FeatureServer::wait_for_sessions(std::size_t n, std::chrono::milliseconds timeout) const {
  std::unique_lock lock(sessions_mu_);
  return sessions_cv_.wait_for(lock, timeout, [&] {
    if (stopping_) return true;
    std::size_t streaming = 0;
    for (const auto& [id, s] : sessions_) streaming += s.state == SessionState::kStreaming;
    return streaming >= n;
  }) && !stopping_;
}

void FeatureServer::update(std::uint64_t id, const std::function<void(StreamSession&)>& f) {
  {
    std::lock_guard lock(sessions_mu_);
    f(sessions_.at(id));
  }
  sessions_cv_.notify_all();
}

void FeatureServer::install_routes() {
  auto& s = *server_;

  s.Get("/cameras", [this](const httplib::Request&, httplib::Response& res) {
    std::string body;
    for (const auto& [id, frames] : cameras_) body += id + "\n";
    res.set_content(body, "text/plain");
  });

  s.Get("/video", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(kVideoPlaceholder, "text/plain");
  });

  s.Get("/stream/features", [this](const httplib::Request& req, httplib::Response& res) {
    std::string camera = req.get_param_value("camera");
    if (camera.empty() && cameras_.size() == 1) camera = cameras_.begin()->first;
    auto cam = cameras_.find(camera);
    if (cam == cameras_.end()) {
      ++denied_;
      res.status = 404;
      res.set_content("unknown camera\n", "text/plain");
      return;
    }
    const std::string token = req.get_header_value(security::kTokenHeader);
    const security::AccessDecision d = check_(token, features_resource(camera));
    if (!d.allowed) {
      ++denied_;
      res.status = 403;
      res.set_content("denied: " + d.reason + "\n", "text/plain");
      return;
    }

    std::uint64_t id = 0;
    {
      std::lock_guard lock(sessions_mu_);
      id = next_session_++;
      StreamSession session;
      session.id = id;
      session.peer_vid = token.substr(0, token.find(':'));
      session.camera_id = camera;
      sessions_[id] = session;
    }
    std::shared_ptr<FrameBroadcaster> frames = cam->second;
    auto seq = std::make_shared<std::uint64_t>(frames->current());
    const std::int64_t expiry_ms = d.expiry_ms;

    res.set_chunked_content_provider(
        "text/plain",
        [this, id, frames, seq, expiry_ms](std::size_t, httplib::DataSink& sink) {
          update(id, [](StreamSession& s) {
            if (s.state == SessionState::kIdle) s.state = SessionState::kStreaming;
          });
          if (stopping_ || !sink.is_writable()) return false;
          if (clock_ != nullptr && clock_->now().ms >= expiry_ms) {
            sink.done();
            return true;
          }
          EncodedFrame bytes;
          switch (frames->wait(*seq, std::chrono::milliseconds(100), &bytes)) {
            case FrameBroadcaster::Wait::kTimeout:
              return true;
            case FrameBroadcaster::Wait::kClosed:
              sink.done();
              return true;
            case FrameBroadcaster::Wait::kOverrun:
              spdlog::warn("stream session {} fell behind the frame ring", id);
              return false;
            case FrameBroadcaster::Wait::kFrame:
              break;
          }
          if (!sink.write(bytes->bytes.data(), bytes->bytes.size())) return false;
          ++*seq;
          feature_bytes_ += bytes->bytes.size();
          update(id, [&](StreamSession& s) {
            s.bytes_sent += bytes->bytes.size();
            s.last_frame_index = bytes->frame_index;
          });
          return true;
        },
        [this, id](bool) {
          update(id, [](StreamSession& s) { s.state = SessionState::kStopped; });
        });
  });
}

FeatureClient::FeatureClient(Endpoint edge, std::chrono::milliseconds read_timeout)
    : edge_(std::move(edge)), read_timeout_(read_timeout) {}

FeatureClient::~FeatureClient() = default;

StreamEnd FeatureClient::fetch(const std::string& camera_id, const std::string& token,
                               const std::function<void(std::string_view)>& on_raw,
                               const std::function<bool(const FrameAssembler::Block&)>& on_frame) {
  httplib::Client cli(edge_.host, edge_.port);
  cli.set_connection_timeout(std::chrono::milliseconds(1000));
  cli.set_read_timeout(read_timeout_);
  {
    std::lock_guard lock(mu_);
    if (cancelled_) return StreamEnd{0, 0, true};
    active_ = &cli;
  }
  struct Detach {
    FeatureClient* self;
    ~Detach() {
      std::lock_guard lock(self->mu_);
      self->active_ = nullptr;
    }
  } detach{this};

  StreamEnd end;
  FrameAssembler assembler;
  int status = 0;
  std::string refusal;
  std::optional<DecodeError> bad;

  httplib::Params params{{"camera", camera_id}};
  auto res = cli.Get(
      httplib::append_query_params("/stream/features", params),
      httplib::Headers{{security::kTokenHeader, token}},
      [&](const httplib::Response& r) {
        status = r.status;
        return true;
      },
      [&](const char* data, std::size_t len) {
        if (status != 200) {
          refusal.append(data, len);
          return true;
        }
        const std::string_view chunk(data, len);
        end.bytes += len;
        if (on_raw) on_raw(chunk);
        std::vector<FrameAssembler::Block> blocks;
        try {
          blocks = assembler.feed(chunk);
        } catch (const DecodeError& e) {
          bad = e;
          return false;
        }
        for (const auto& b : blocks) {
          ++end.frames;
          if (!on_frame(b)) {
            end.stopped_by_caller = true;
            return false;
          }
        }
        return true;
      });

  if (bad) throw *bad;
  if (status == 403) throw AccessDenied(refusal.empty() ? "denied" : refusal);
  if (status != 0 && status != 200) {
    throw ConnectionError("HTTP " + std::to_string(status) + " from " + edge_.to_string() + ": " +
                          refusal);
  }
  if (!res) {
    if (end.stopped_by_caller) return end;
    {
      std::lock_guard lock(mu_);
      if (cancelled_) {
        end.stopped_by_caller = true;
        return end;
      }
    }
    // Connection loss after a successful start is the end of the stream.
    if (status == 200) return end;
    throw ConnectionError(edge_.to_string() + ": " + httplib::to_string(res.error()));
  }
  return end;
}

std::vector<std::string> FeatureClient::cameras() {
  httplib::Client cli(edge_.host, edge_.port);
  cli.set_connection_timeout(std::chrono::milliseconds(1000));
  cli.set_read_timeout(std::chrono::milliseconds(5000));
  auto res = cli.Get("/cameras");
  if (!res) throw ConnectionError(edge_.to_string() + ": " + httplib::to_string(res.error()));
  std::vector<std::string> out;
  std::string_view body = res->body;
  while (!body.empty()) {
    const auto nl = body.find('\n');
    out.emplace_back(body.substr(0, nl));
    if (nl == std::string_view::npos) break;
    body.remove_prefix(nl + 1);
  }
  return out;
}

void FeatureClient::cancel() {
  std::lock_guard lock(mu_);
  cancelled_ = true;
  if (active_ != nullptr) active_->stop();
}

}  // namespace lisps::wire
