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

#include <map>
#include <mutex>

#include "lisps/edge/pipeline.hpp"
#include "lisps/edge/service.hpp"
#include "lisps/fog/node.hpp"
#include "lisps/ledger/node.hpp"
#include "lisps/security/ledger_view.hpp"
#include "lisps/security/recorder.hpp"
#include "lisps/sim/replay.hpp"
#include "lisps/sim/scenario.hpp"
#include "lisps/wire/stream.hpp"
#include "temp_dir.hpp"

namespace lisps {
namespace {

using namespace std::chrono_literals;

Config scenario_config(double frame_rate, int seconds) {
  Config c;
  c.set("edge.frame_rate", std::to_string(frame_rate));
  c.set("sim.duration_s", std::to_string(seconds));
  c.set("sim.respawn", "false");
  return c;
}

std::unique_ptr<edge::EdgePipeline> pipeline_for(const sim::Scenario& s, const Config& cfg) {
  return std::make_unique<edge::EdgePipeline>("cam-01", edge::edge_config_from(cfg),
                                              sim::scenario_detector(s, "cam-01", cfg),
                                              s.params().epoch);
}

TEST(EdgeService, PacedRunKeepsTheFrameRate) {
  const Config cfg = scenario_config(25.0, 2);
  const sim::Scenario s = sim::generate_scenario(sim::ScenarioParams::from(cfg), 1);
  SystemClock wall;
  edge::EdgeService service(pipeline_for(s, cfg), std::make_shared<wire::FrameBroadcaster>(),
                            wall);
  std::vector<edge::FrameEvent> events;
  service.set_observer([&](const edge::FrameEvent& e) { events.push_back(e); });
  edge::EdgeRunOptions run;
  run.frames = 50;
  run.subscribers = 0;
  const edge::EdgeRunStats stats = service.run(run);
  EXPECT_EQ(stats.frames, 50);
  EXPECT_EQ(stats.missed_deadlines, 0);
  EXPECT_NEAR(stats.fps(), 25.0, 1.0);
  ASSERT_EQ(events.size(), 50u);
  for (std::size_t i = 0; i < events.size(); ++i) {
    EXPECT_EQ(events[i].frame_index, static_cast<std::int64_t>(i));
    EXPECT_EQ(events[i].frame_time.ms, s.params().epoch.ms + 40 * static_cast<std::int64_t>(i));
    EXPECT_LE(events[i].capture.ms, events[i].published.ms);
    EXPECT_GT(events[i].bytes, 0u);
  }
}

TEST(EdgeService, UnpacedRunPublishesEveryFrame) {
  const Config cfg = scenario_config(5.0, 20);
  const sim::Scenario s = sim::generate_scenario(sim::ScenarioParams::from(cfg), 2);
  SystemClock wall;
  auto frames = std::make_shared<wire::FrameBroadcaster>();
  edge::EdgeService service(pipeline_for(s, cfg), frames, wall);
  edge::EdgeRunOptions run;
  run.frames = 100;
  run.subscribers = 0;
  run.paced = false;
  EXPECT_EQ(service.run(run).frames, 100);
  EXPECT_EQ(frames->published(), 100u);
}

TEST(HashedIndexRecorder, RecordsEveryNthFrame) {
  const ledger::KeyPair miner = ledger::KeyPair::from_name("miner-1");
  const ledger::KeyPair edge_key = ledger::KeyPair::from_name("edge-cam-01");
  ledger::NodeOptions o;
  o.genesis.timestamp_ms = SystemClock().now().ms;
  o.genesis.block_interval_ms = 50;
  o.genesis.miners = {{"m", miner.public_key()}};
  o.genesis.identities = {edge_key.public_key()};
  o.genesis.grants = {{ledger::vid_of(ledger::address_of(edge_key.public_key())), "camera/cam-01",
                       ledger::kManage, ledger::kNeverExpires}};
  o.miner = miner;
  ledger::LedgerNode node(o);
  node.start();
  security::LocalLedgerView view(node);
  SystemClock wall;
  security::SecurityServices services(view, wall);
  security::HashedIndexRecorder recorder(services, edge_key, 2);
  for (std::int64_t i = 0; i < 6; ++i) {
    if (recorder.wants(i)) recorder.enqueue("cam-01", i, "frame " + std::to_string(i));
  }
  EXPECT_FALSE(recorder.wants(3));
  ASSERT_TRUE(recorder.drain(10s));
  EXPECT_EQ(recorder.accepted(), 3u);
  EXPECT_EQ(recorder.rejected(), 0u);
  // Accepted means admitted; inclusion follows within a few blocks.
  const auto deadline = std::chrono::steady_clock::now() + 5s;
  while (services.verify_hashed_index("cam-01/frame/4", as_bytes("frame 4")) !=
             security::HiaStatus::kAuthentic &&
         std::chrono::steady_clock::now() < deadline) {
    std::this_thread::sleep_for(20ms);
  }
  EXPECT_EQ(services.verify_hashed_index("cam-01/frame/0", as_bytes("frame 0")),
            security::HiaStatus::kAuthentic);
  EXPECT_EQ(services.verify_hashed_index("cam-01/frame/4", as_bytes("frame 4")),
            security::HiaStatus::kAuthentic);
  EXPECT_EQ(services.verify_hashed_index("cam-01/frame/1", as_bytes("frame 1")),
            security::HiaStatus::kUnknown);
  recorder.stop();
  node.stop();
}

// A fog node fed over loopback decides exactly like the in-process replay.
TEST(FogNode, LoopbackStreamMatchesReplay) {
  const Config cfg = scenario_config(5.0, 60);
  const sim::Scenario s = sim::generate_scenario(sim::ScenarioParams::from(cfg), 11);
  const sim::ReplayResult expected = sim::replay_scenario(s, cfg);
  ASSERT_FALSE(expected.alerts.empty());

  auto frames = std::make_shared<wire::FrameBroadcaster>();
  wire::FeatureServer server(Endpoint{"127.0.0.1", 0}, [](std::string_view, std::string_view) {
    return security::AccessDecision::allow(INT64_MAX);
  });
  server.add_camera("cam-01", frames);
  server.start();

  test::TempDir dir;
  const sim::DecisionSettings settings = sim::DecisionSettings::from(cfg);
  auto dispatcher = std::make_shared<fog::AlertDispatcher>(settings.threshold, settings.cooldown_ms);
  auto sink = std::make_shared<fog::MemoryAlertSink>();
  dispatcher->set_receiver("*", settings.receiver, sink);
  fog::FogOptions opts;
  opts.storage_root = dir.path();
  SystemClock wall;
  fog::FogNode fog(opts, sim::assessor_from(cfg), dispatcher, [] { return "token"; }, wall);
  fog.add_camera(sim::feed_from(cfg, "cam-01", server.endpoint()));
  std::mutex mu;
  std::vector<std::int64_t> order;
  fog.set_observer([&](const fog::FrameReport& r) {
    std::lock_guard lock(mu);
    order.push_back(r.frame_index);
  });
  fog.start();

  edge::EdgeService service(pipeline_for(s, cfg), frames, wall);
  service.set_server(&server);
  edge::EdgeRunOptions run;
  run.frames = s.params().frames;
  run.paced = false;
  EXPECT_EQ(service.run(run).frames, 300);
  ASSERT_TRUE(fog.wait_for_frames(300, 20s));
  fog.stop();
  server.stop();

  ASSERT_EQ(order.size(), 300u);
  for (std::size_t i = 0; i < order.size(); ++i) EXPECT_EQ(order[i], static_cast<std::int64_t>(i));
  const std::vector<fog::Alert> got = sink->alerts();
  ASSERT_EQ(got.size(), expected.alerts.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_EQ(fog::format_alert(got[i]), fog::format_alert(expected.alerts[i]));
  }
  EXPECT_TRUE(std::filesystem::exists(dir.path()));
}

}  // namespace
}  // namespace lisps
