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

#include <gtest/gtest.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <random>
#include <thread>

#include "lisps/wire/stream.hpp"
#include "printers.hpp"
#include "random_frames.hpp"
#include "wait.hpp"

namespace lisps::wire {
namespace {

using security::AccessDecision;
using test::eventually;

AccessCheck allow_all() {
  return [](std::string_view, std::string_view) { return AccessDecision::allow(INT64_MAX); };
}

FrameFeatureSet numbered(std::int64_t i) {
  FrameFeatureSet f;
  f.frame_index = i;
  f.camera_id = "cam-01";
  f.timestamp = Timestamp{100'000 + 200 * i};
  edge::FeatureRecord r;
  r.object_id = Timestamp{100'000};
  r.speed = 1.5;
  r.dwell = static_cast<double>(200 * i) / 1000.0;
  r.bbox = edge::BoundingBox(i, 0, i + 10, 20);
  f.objects.emplace(r.object_id, r);
  return f;
}

struct Served {
  std::shared_ptr<FrameBroadcaster> frames = std::make_shared<FrameBroadcaster>();
  FeatureServer server;

  explicit Served(AccessCheck check) : server(Endpoint{"127.0.0.1", 0}, std::move(check)) {
    server.add_camera("cam-01", frames);
    server.start();
  }
};

struct Collected {
  std::string raw;
  std::vector<FrameFeatureSet> frames;
};

// Fetches until `count` frames arrive.
Collected fetch_n(const Endpoint& ep, std::size_t count, const std::string& token = "t") {
  Collected c;
  FeatureClient client(ep);
  client.fetch(
      "cam-01", token, [&](std::string_view raw) { c.raw.append(raw); },
      [&](const FrameAssembler::Block& b) {
        c.frames.push_back(b.frame);
        return c.frames.size() < count;
      });
  return c;
}

TEST(FrameBroadcaster, EncodesOnceAndSharesBytes) {
  FrameBroadcaster b(4);
  EXPECT_EQ(b.current(), 0u);
  const EncodedFrame e = b.publish(numbered(0));
  EXPECT_EQ(e->bytes, encode_frame(numbered(0)));
  EncodedFrame x, y;
  ASSERT_EQ(b.wait(0, std::chrono::milliseconds(0), &x), FrameBroadcaster::Wait::kFrame);
  ASSERT_EQ(b.wait(0, std::chrono::milliseconds(0), &y), FrameBroadcaster::Wait::kFrame);
  EXPECT_EQ(x.get(), e.get());
  EXPECT_EQ(y.get(), e.get());
  EXPECT_EQ(b.wait(1, std::chrono::milliseconds(1), &x), FrameBroadcaster::Wait::kTimeout);
  for (int i = 1; i <= 5; ++i) b.publish(numbered(i));
  EXPECT_EQ(b.current(), 5u);
  EXPECT_EQ(b.wait(1, std::chrono::milliseconds(0), &x), FrameBroadcaster::Wait::kOverrun);
  ASSERT_EQ(b.wait(2, std::chrono::milliseconds(0), &x), FrameBroadcaster::Wait::kFrame);
  EXPECT_EQ(x->frame_index, 2);
  b.close();
  EXPECT_EQ(b.wait(6, std::chrono::milliseconds(1000), &x), FrameBroadcaster::Wait::kClosed);
}

TEST(FeatureServer, LoopbackDeliversEveryFrameInOrder) {
  Served s(allow_all());
  Collected got;
  std::thread reader([&] { got = fetch_n(s.server.endpoint(), 30); });
  ASSERT_TRUE(s.server.wait_for_sessions(1, std::chrono::seconds(5)));
  std::string expected;
  for (int i = 0; i < 30; ++i) expected += s.frames->publish(numbered(i))->bytes;
  reader.join();
  ASSERT_EQ(got.frames.size(), 30u);
  for (int i = 0; i < 30; ++i) EXPECT_EQ(got.frames[i], numbered(i));
  EXPECT_EQ(got.raw, expected);
}

TEST(FeatureServer, ConcurrentClientsReceiveIdenticalBytes) {
  Served s(allow_all());
  Collected a, b;
  std::thread ta([&] { a = fetch_n(s.server.endpoint(), 10); });
  std::thread tb([&] { b = fetch_n(s.server.endpoint(), 10); });
  ASSERT_TRUE(s.server.wait_for_sessions(2, std::chrono::seconds(5)));
  for (int i = 0; i < 10; ++i) s.frames->publish(numbered(i));
  ta.join();
  tb.join();
  ASSERT_EQ(a.frames.size(), 10u);
  EXPECT_EQ(a.raw, b.raw);
  EXPECT_EQ(s.server.feature_bytes_sent(), 2 * a.raw.size());
}

TEST(FeatureServer, DeniedClientGetsNoFeatureBytes) {
  Served s([](std::string_view token, std::string_view resource) {
    EXPECT_EQ(resource, "camera/cam-01/features");
    return token == "good" ? AccessDecision::allow(INT64_MAX) : AccessDecision::deny("no grant");
  });
  for (int i = 0; i < 5; ++i) s.frames->publish(numbered(i));
  FeatureClient client(s.server.endpoint());
  int frames = 0;
  try {
    client.fetch("cam-01", "bad", nullptr, [&](const auto&) { return ++frames < 100; });
    FAIL() << "expected AccessDenied";
  } catch (const AccessDenied& e) {
    EXPECT_EQ(std::string(e.what()), "denied: no grant\n");
  }
  EXPECT_EQ(frames, 0);
  EXPECT_EQ(s.server.feature_bytes_sent(), 0u);
  EXPECT_EQ(s.server.denied_requests(), 1u);
  EXPECT_TRUE(s.server.sessions().empty());
  EXPECT_THROW(client.fetch("cam-02", "good", nullptr, [](const auto&) { return false; }),
               ConnectionError);
}

TEST(FeatureServer, NoBytesBeforeARequest) {
  Served s(allow_all());
  for (int i = 0; i < 20; ++i) s.frames->publish(numbered(i));
  EXPECT_EQ(s.server.feature_bytes_sent(), 0u);
  EXPECT_EQ(s.server.streaming_sessions(), 0u);
}

TEST(FeatureServer, ReconnectResumesFromCurrentFrameWithoutReplay) {
  Served s(allow_all());
  Collected first;
  std::thread t1([&] { first = fetch_n(s.server.endpoint(), 3); });
  ASSERT_TRUE(s.server.wait_for_sessions(1, std::chrono::seconds(5)));
  for (int i = 0; i < 3; ++i) s.frames->publish(numbered(i));
  t1.join();
  ASSERT_EQ(first.frames.size(), 3u);
  ASSERT_TRUE(eventually([&] { return s.server.streaming_sessions() == 0; }));

  // Frames published while no one listens are not replayed.
  for (int i = 3; i < 8; ++i) s.frames->publish(numbered(i));
  Collected second;
  std::thread t2([&] { second = fetch_n(s.server.endpoint(), 3); });
  ASSERT_TRUE(s.server.wait_for_sessions(1, std::chrono::seconds(5)));
  for (int i = 8; i < 10; ++i) s.frames->publish(numbered(i));
  t2.join();
  ASSERT_EQ(second.frames.size(), 3u);
  EXPECT_EQ(second.frames[0].frame_index, 7);
  EXPECT_EQ(second.frames[1].frame_index, 8);
  EXPECT_EQ(second.frames[2].frame_index, 9);

  const auto sessions = s.server.sessions();
  ASSERT_EQ(sessions.size(), 2u);
  EXPECT_EQ(sessions[0].state, SessionState::kStopped);
  EXPECT_EQ(sessions[0].last_frame_index, 2);
  EXPECT_TRUE(eventually([&] { return s.server.sessions()[1].state == SessionState::kStopped; }));
}

TEST(FeatureServer, CamerasAndVideoPlaceholder) {
  auto frames = std::make_shared<FrameBroadcaster>();
  FeatureServer server(Endpoint{"127.0.0.1", 0}, allow_all());
  server.add_camera("cam-02", frames);
  server.add_camera("cam-01", frames);
  server.start();
  FeatureClient client(server.endpoint());
  EXPECT_EQ(client.cameras(), (std::vector<std::string>{"cam-01", "cam-02"}));
  EXPECT_THROW(server.add_camera("bad id", frames), std::invalid_argument);
}

TEST(FeatureClient, ServerDownIsAConnectionError) {
  int port = 0;
  {
    FeatureServer probe(Endpoint{"127.0.0.1", 0}, allow_all());
    port = probe.bind();
  }
  FeatureClient client(Endpoint{"127.0.0.1", port});
  int frames = 0;
  EXPECT_THROW(client.fetch("cam-01", "t", nullptr, [&](const auto&) { return ++frames > 0; }),
               ConnectionError);
  EXPECT_EQ(frames, 0);
}

TEST(FeatureClient, CancelStopsAnIdleStream) {
  Served s(allow_all());
  FeatureClient client(s.server.endpoint());
  StreamEnd end;
  std::thread t([&] { end = client.fetch("cam-01", "t", nullptr, [](const auto&) { return true; }); });
  ASSERT_TRUE(s.server.wait_for_sessions(1, std::chrono::seconds(5)));
  client.cancel();
  t.join();
  EXPECT_TRUE(end.stopped_by_caller);
}

// Minimal HTTP server that sends `body` as one-byte chunks.
class TrickleServer {
 public:
  explicit TrickleServer(std::string body) : body_(std::move(body)) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    ::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr);
    socklen_t len = sizeof addr;
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
    ::listen(fd_, 1);
    thread_ = std::thread([this] { serve(); });
  }
  ~TrickleServer() {
    thread_.join();
    ::close(fd_);
  }
  int port() const { return port_; }

 private:
  void serve() {
    const int c = ::accept(fd_, nullptr, nullptr);
    char buf[4096];
    std::string req;
    while (req.find("\r\n\r\n") == std::string::npos) {
      const ssize_t n = ::read(c, buf, sizeof buf);
      if (n <= 0) break;
      req.append(buf, static_cast<std::size_t>(n));
    }
    send(c, "HTTP/1.1 200 OK\r\nContent-Type: text/plain\r\nTransfer-Encoding: chunked\r\n\r\n");
    for (char ch : body_) send(c, std::string("1\r\n") + ch + "\r\n");
    send(c, "0\r\n\r\n");
    ::close(c);
  }
  static void send(int c, const std::string& s) {
    for (std::size_t off = 0; off < s.size();) {
      const ssize_t n = ::write(c, s.data() + off, s.size() - off);
      if (n <= 0) return;
      off += static_cast<std::size_t>(n);
    }
  }

  std::string body_;
  int fd_ = -1;
  int port_ = 0;
  std::thread thread_;
};

TEST(FeatureClient, OneByteDeliveryMatchesBulkDelivery) {
  std::mt19937_64 rng(11);
  std::vector<FrameFeatureSet> sent;
  std::string stream;
  for (int i = 0; i < 12; ++i) {
    sent.push_back(test::random_frame(rng));
    stream += encode_frame(sent.back());
  }
  TrickleServer trickle(stream);
  FeatureClient client(Endpoint{"127.0.0.1", trickle.port()});
  std::vector<FrameFeatureSet> got;
  std::string raw;
  std::size_t max_chunk = 0;
  const StreamEnd end = client.fetch(
      "cam-01", "t",
      [&](std::string_view r) {
        raw.append(r);
        max_chunk = std::max(max_chunk, r.size());
      },
      [&](const FrameAssembler::Block& b) {
        got.push_back(b.frame);
        return true;
      });
  EXPECT_EQ(got, sent);
  EXPECT_EQ(raw, stream);
  EXPECT_EQ(end.frames, 12u);
  EXPECT_FALSE(end.stopped_by_caller);
}

}  // namespace
}  // namespace lisps::wire
