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


#include <spdlog/spdlog.h>

#include <memory>

#include "commands.hpp"
#include "common.hpp"
#include "lisps/common/net.hpp"
#include "lisps/fog/alerts.hpp"
#include "lisps/fog/node.hpp"
#include "lisps/security/token.hpp"
#include "lisps/sim/metrics.hpp"
#include "lisps/sim/replay.hpp"

namespace lisps::tools {

namespace {

struct FogFlags {
  ConfigFlags config;
  KeyFlags key;
  std::vector<std::string> edges;
  std::string alerts = "alerts.log";
  std::string webhook;
  std::string events;
  std::string storage = "fog-store";
};

int run_fog(const FogFlags& f) {
  init_logging("fog");
  const Config cfg = load_config(f.config);
  const ledger::KeyPair key = *load_key(f.key);
  const sim::DecisionSettings settings = sim::DecisionSettings::from(cfg);

  auto dispatcher = std::make_shared<fog::AlertDispatcher>(settings.threshold, settings.cooldown_ms);
  std::shared_ptr<fog::AlertSink> sink;
  if (!f.webhook.empty()) {
    sink = std::make_shared<fog::WebhookAlertSink>(f.webhook);
  } else {
    auto file = std::make_shared<fog::FileAlertSink>(f.alerts);
    LineLog touch(file->path());
    sink = file;
  }
  dispatcher->set_receiver("*", settings.receiver, sink);

  fog::FogOptions opts;
  opts.storage_root = f.storage;
  opts.utc_offset_minutes = settings.utc_offset_minutes;
  opts.workers = static_cast<std::size_t>(cfg.get_int("fog.workers", 0));
  SystemClock wall;
  fog::FogNode node(opts, sim::assessor_from(cfg), dispatcher,
                    [&] { return security::make_token(key, wall.now()).format(); }, wall);
  for (const auto& spec : f.edges) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--edge must be camera=host:port");
    const std::string cam = spec.substr(0, eq);
    node.add_camera(sim::feed_from(cfg, cam, parse_endpoint(spec.substr(eq + 1))));
  }
  std::unique_ptr<LineLog> events;
  if (!f.events.empty()) events = std::make_unique<LineLog>(f.events);
  node.set_observer([&](const fog::FrameReport& r) {
    if (events) events->write(sim::format_fog_event(r));
  });

  ShutdownSignal signal;
  node.start();
  signal.wait();
  node.stop();
  spdlog::info("fog stopped after {} frame(s), {} alert(s) still queued", node.frames_processed(),
               dispatcher->pending());
  return 0;
}

}  // namespace

Command add_fog_command(CLI::App& app) {
  auto flags = std::make_shared<FogFlags>();
  CLI::App* sub = app.add_subcommand("fog", "Consume feature streams and dispatch alerts");
  add_config_flags(*sub, flags->config);
  add_key_flags(*sub, flags->key, true);
  sub->add_option("--edge", flags->edges, "Camera feed, camera=host:port")->required();
  sub->add_option("--alerts", flags->alerts, "Alert file of the designated receiver");
  sub->add_option("--webhook", flags->webhook, "POST alerts to this http:// URL instead");
  sub->add_option("--events", flags->events, "Append frame events to this file");
  sub->add_option("--storage", flags->storage, "Root of the daily stream files and references");
  return [flags] { return run_fog(*flags); };
}

}  // namespace lisps::tools
