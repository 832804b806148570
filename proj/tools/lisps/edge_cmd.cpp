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


#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <memory>
#include <thread>

#include "commands.hpp"
#include "common.hpp"
#include "lisps/common/net.hpp"
#include "lisps/edge/pipeline.hpp"
#include "lisps/edge/service.hpp"
#include "lisps/ledger/contracts.hpp"
#include "lisps/security/ledger_view.hpp"
#include "lisps/security/recorder.hpp"
#include "lisps/security/screen.hpp"
#include "lisps/security/services.hpp"
#include "lisps/sim/metrics.hpp"
#include "lisps/sim/scenario.hpp"
#include "lisps/wire/stream.hpp"

namespace lisps::tools {

namespace {

using namespace std::chrono_literals;

struct EdgeFlags {
  ConfigFlags config;
  KeyFlags key;
  std::uint64_t seed = 0;
  std::string camera = "cam-01";
  std::string listen = "127.0.0.1:8000";
  std::string ledger = "127.0.0.1:7000";
  std::string events;
  std::int64_t frames = 0;
};

int run_edge(const EdgeFlags& f) {
  init_logging("edge " + f.camera);
  const Config cfg = load_config(f.config);
  const ledger::KeyPair key = *load_key(f.key);

  sim::ScenarioParams params = sim::ScenarioParams::from(cfg);
  if (std::find(params.cameras.begin(), params.cameras.end(), f.camera) == params.cameras.end()) {
    params.cameras.push_back(f.camera);
  }
  const sim::Scenario scenario = sim::generate_scenario(params, f.seed);
  const std::int64_t frames = f.frames != 0 ? f.frames : params.frames;

  SystemClock wall;
  security::HttpLedgerView view(parse_endpoint(f.ledger), 2s);
  security::SecurityServices services(view, wall);
  std::int64_t cache_ms = 2000;
  try {
    cache_ms = view.block_interval_ms();
  } catch (const security::LedgerUnavailable& e) {
    spdlog::warn("ledger unreachable, caching decisions for {} ms: {}", cache_ms, e.what());
  }
  security::AccessScreen screen(services, cache_ms);

  auto broadcaster = std::make_shared<wire::FrameBroadcaster>();
  wire::FeatureServer server(parse_endpoint(f.listen),
                             [&](std::string_view token, std::string_view resource) {
                               return screen.check(token, resource, ledger::kRead);
                             });
  server.add_camera(f.camera, broadcaster);
  server.set_clock(&wall);
  server.start();
  spdlog::info("serving {} on {}", f.camera, server.endpoint().to_string());

  security::HashedIndexRecorder recorder(services, key, cfg.get_int("edge.hia_every", 1));
  edge::EdgeService service(
      std::make_unique<edge::EdgePipeline>(f.camera, edge::edge_config_from(cfg),
                                           sim::scenario_detector(scenario, f.camera, cfg),
                                           params.epoch),
      broadcaster, wall);
  service.set_server(&server);
  service.set_recorder(&recorder);
  std::unique_ptr<LineLog> events;
  if (!f.events.empty()) events = std::make_unique<LineLog>(f.events);
  service.set_observer([&](const edge::FrameEvent& ev) {
    if (events) events->write(sim::format_edge_event(ev));
  });

  ShutdownSignal signal;
  signal.on_signal([&] { service.stop(); });

  edge::EdgeRunOptions run;
  run.frames = frames;
  run.subscribers = static_cast<std::size_t>(cfg.get_int("edge.wait_for_subscribers", 1));
  const edge::EdgeRunStats stats = service.run(run);
  spdlog::info("{} frame(s) at {:.3f} FPS, {} missed deadline(s)", stats.frames, stats.fps(),
               stats.missed_deadlines);

  if (!recorder.drain(signal.received() ? 5s : 120s)) {
    spdlog::warn("hashed-index queue not drained");
  }
  recorder.stop();
  spdlog::info("hashed indices: {} accepted, {} rejected", recorder.accepted(),
               recorder.rejected());

  // Let open sessions deliver what is left of the ring, then end them.
  broadcaster->close();
  const auto deadline = std::chrono::steady_clock::now() + 10s;
  while (server.streaming_sessions() > 0 && std::chrono::steady_clock::now() < deadline &&
         !signal.received()) {
    std::this_thread::sleep_for(50ms);
  }
  server.stop();
  fmt::print("edge {} frames={} fps={:.3f} missed={} feature_bytes={}\n", f.camera, stats.frames,
             stats.fps(), stats.missed_deadlines, server.feature_bytes_sent());
  return recorder.rejected() == 0 ? 0 : 3;
}

}  // namespace

Command add_edge_command(CLI::App& app) {
  auto flags = std::make_shared<EdgeFlags>();
  CLI::App* sub = app.add_subcommand("edge", "Serve one camera's feature stream");
  add_config_flags(*sub, flags->config);
  add_key_flags(*sub, flags->key, true);
  sub->add_option("--seed", flags->seed, "Scenario seed");
  sub->add_option("--camera", flags->camera, "Camera id");
  sub->add_option("--listen", flags->listen, "Address to serve on, host:port");
  sub->add_option("--ledger", flags->ledger, "Ledger node, host:port");
  sub->add_option("--events", flags->events, "Append frame events to this file");
  sub->add_option("--frames", flags->frames,
                  "Frames to produce; 0 uses the scenario length, -1 runs until stopped");
  return [flags] { return run_edge(*flags); };
}

}  // namespace lisps::tools
