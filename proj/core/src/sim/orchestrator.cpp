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


#include "lisps/sim/orchestrator.hpp"

#include <fmt/format.h>
#include <httplib.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include <fstream>
#include <functional>
#include <memory>
#include <stdexcept>
#include <thread>
#include <vector>

#include "lisps/ledger/chain.hpp"
#include "lisps/ledger/contracts.hpp"
#include "lisps/ledger/crypto.hpp"
#include "lisps/security/ledger_view.hpp"
#include "lisps/security/services.hpp"
#include "lisps/sim/process.hpp"
#include "lisps/sim/scenario.hpp"
#include "lisps/wire/stream.hpp"

namespace lisps::sim {

namespace {

using json = nlohmann::json;
using namespace std::chrono_literals;

class RunFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw RunFailure("cannot write " + path.string());
}

std::optional<json> get_json(const Endpoint& node, const std::string& path) {
  httplib::Client cli(node.host, node.port);
  cli.set_connection_timeout(1s);
  cli.set_read_timeout(2s);
  auto res = cli.Get(path);
  if (!res || res->status != 200) return std::nullopt;
  try {
    return json::parse(res->body);
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

class Supervisor {
 public:
  ChildProcess& spawn(const std::string& name, std::vector<std::string> argv,
                      const std::filesystem::path& out_dir) {
    spdlog::info("sim: starting {}", name);
    children_.push_back(std::make_unique<ChildProcess>(name, argv, out_dir / (name + ".log")));
    return *children_.back();
  }

  // Fails the run if a child that should still be running has exited.
  void check(const std::vector<ChildProcess*>& finished_ok = {}) {
    for (auto& c : children_) {
      bool allowed = false;
      for (auto* f : finished_ok) allowed |= f == c.get();
      if (allowed) continue;
      if (auto status = c->poll()) {
        throw RunFailure(fmt::format("{} exited with status {} (see {})", c->name(), *status,
                                     c->log_path().string()));
      }
    }
  }

  void wait_until(const std::function<bool()>& pred, std::chrono::milliseconds timeout,
                  const std::string& what,
                  const std::vector<ChildProcess*>& finished_ok = {}) {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    while (!pred()) {
      check(finished_ok);
      if (std::chrono::steady_clock::now() >= deadline) {
        throw RunFailure("timed out waiting for " + what);
      }
      std::this_thread::sleep_for(100ms);
    }
  }

  void terminate_all() {
    for (auto it = children_.rbegin(); it != children_.rend(); ++it) (*it)->terminate();
  }

 private:
  std::vector<std::unique_ptr<ChildProcess>> children_;
};

bool fog_reached(const std::filesystem::path& events, const std::vector<std::string>& cameras,
                 std::int64_t last_frame) {
  if (!std::filesystem::exists(events)) return false;
  std::map<std::string, bool> done;
  for (const auto& e : read_events(events)) {
    if (e.kind == "FRAME" && e.integer("frame") == last_frame) done[e.at("cam")] = true;
  }
  for (const auto& cam : cameras) {
    if (!done[cam]) return false;
  }
  return true;
}

}  // namespace

std::string miner_key_name(int index) { return fmt::format("miner-{}", index + 1); }

std::string edge_key_name(const std::string& camera_id) { return "edge-" + camera_id; }

std::int64_t recorded_frames(std::int64_t frames, std::int64_t every) {
  if (every <= 0 || frames <= 0) return 0;
  return (frames - 1) / every + 1;
}

RunResult run_scenario(const RunOptions& options) {
  RunResult result;
  Supervisor sup;
  try {
    const Config& cfg = options.config;
    const std::filesystem::path& out = options.out_dir;
    std::filesystem::create_directories(out);
    for (const char* stale : {"alerts.log", "fog.events", "metrics.txt", "ledger-digest.txt"}) {
      std::filesystem::remove(out / stale);
    }
    std::filesystem::remove_all(out / "store");

    const Scenario scenario = generate_scenario(ScenarioParams::from(cfg), options.seed);
    const ScenarioParams& params = scenario.params();
    const auto run_time = std::chrono::milliseconds(
        static_cast<std::int64_t>(1000.0 * params.frames / params.frame_rate));
    const auto slack = std::chrono::duration_cast<std::chrono::milliseconds>(options.slack);

    const std::filesystem::path config_path = out / "config.cfg";
    write_file(config_path, cfg.to_text());
    write_file(out / "scenario.txt", scenario.describe());

    // Ledger genesis: miners, the admin, every edge and the fog.
    const int miner_count = static_cast<int>(cfg.get_int("ledger.miners", 3));
    if (miner_count < 1) throw RunFailure("ledger.miners must be >= 1");
    ledger::GenesisConfig genesis;
    genesis.block_interval_ms = cfg.get_int("ledger.block_interval_ms", 2000);
    genesis.timestamp_ms = SystemClock().now().ms;
    for (int i = 0; i < miner_count; ++i) {
      genesis.miners.push_back(
          {miner_key_name(i), ledger::KeyPair::from_name(miner_key_name(i)).public_key()});
    }
    const auto admin = ledger::KeyPair::from_name(kAdminKey);
    const auto fog_key = ledger::KeyPair::from_name(kFogKey);
    genesis.identities.push_back(admin.public_key());
    genesis.identities.push_back(fog_key.public_key());
    genesis.grants.push_back({ledger::vid_of(ledger::address_of(admin.public_key())), "",
                              ledger::kRead | ledger::kManage, ledger::kNeverExpires});
    for (const auto& cam : params.cameras) {
      const auto key = ledger::KeyPair::from_name(edge_key_name(cam));
      genesis.identities.push_back(key.public_key());
      genesis.grants.push_back({ledger::vid_of(ledger::address_of(key.public_key())),
                                "camera/" + cam, ledger::kRead | ledger::kManage,
                                ledger::kNeverExpires});
    }
    genesis.validate();
    const std::filesystem::path genesis_path = out / "genesis.json";
    write_file(genesis_path, genesis.to_json());

    const std::string cli = options.cli.string();
    std::vector<Endpoint> miners;
    for (int i = 0; i < miner_count; ++i) miners.push_back({"127.0.0.1", pick_free_port()});
    for (int i = 0; i < miner_count; ++i) {
      std::vector<std::string> argv{cli, "miner", "--genesis", genesis_path.string(),
                                    "--key", miner_key_name(i), "--listen",
                                    miners[i].to_string(), "--registrar", kAdminKey};
      for (int j = 0; j < miner_count; ++j) {
        if (j != i) {
          argv.push_back("--peer");
          argv.push_back(miners[j].to_string());
        }
      }
      sup.spawn(miner_key_name(i), argv, out);
    }
    for (const auto& m : miners) {
      sup.wait_until([&] { return get_json(m, "/head").has_value(); }, 15s,
                     "miner " + m.to_string());
    }

    // The fog's read grant goes through the ledger like any other grant.
    security::HttpLedgerView view(miners.front(), 2s);
    SystemClock wall;
    security::SecurityServices services(view, wall);
    const std::int64_t ttl_ms =
        cfg.get_int("ledger.grant_ttl_s", run_time.count() / 1000 + 600) * 1000;
    const std::string fog_vid = ledger::vid_of(ledger::address_of(fog_key.public_key()));
    for (const auto& cam : params.cameras) {
      const ledger::Receipt r = services.grant_access(admin, fog_vid, wire::features_resource(cam),
                                                      ledger::kRead, ttl_ms);
      if (!r.ok) throw RunFailure("grant for " + cam + " failed: " + r.message);
    }

    std::vector<ChildProcess*> edges;
    std::vector<std::string> fog_args{cli, "fog", "--config", config_path.string(),
                                      "--key", kFogKey, "--alerts", (out / "alerts.log").string(),
                                      "--events", (out / "fog.events").string(),
                                      "--storage", (out / "store").string()};
    for (std::size_t c = 0; c < params.cameras.size(); ++c) {
      const std::string& cam = params.cameras[c];
      const Endpoint listen{"127.0.0.1", pick_free_port()};
      const Endpoint& ledger_node = miners[c % miners.size()];
      edges.push_back(&sup.spawn(
          "edge-" + cam,
          {cli, "edge", "--config", config_path.string(), "--seed", std::to_string(options.seed),
           "--camera", cam, "--key", edge_key_name(cam), "--listen", listen.to_string(),
           "--ledger", ledger_node.to_string(), "--events",
           (out / ("edge-" + cam + ".events")).string()},
          out));
      fog_args.push_back("--edge");
      fog_args.push_back(cam + "=" + listen.to_string());
    }
    ChildProcess& fog = sup.spawn("fog", fog_args, out);

    sup.wait_until(
        [&] {
          for (auto* e : edges) {
            if (!e->poll()) return false;
          }
          return true;
        },
        run_time + slack, "the edge nodes to finish", edges);
    for (auto* e : edges) {
      const int status = *e->poll();
      if (status != 0) {
        throw RunFailure(fmt::format("{} exited with status {} (see {})", e->name(), status,
                                     e->log_path().string()));
      }
    }
    sup.wait_until([&] { return fog_reached(out / "fog.events", params.cameras, params.frames - 1); },
                   slack, "the fog to process the last frame", edges);
    if (const int status = fog.terminate(); status != 0) {
      throw RunFailure(fmt::format("fog exited with status {} (see {})", status,
                                   fog.log_path().string()));
    }

    // Every recorded frame hash must be committed on every miner.
    const std::int64_t every = cfg.get_int("edge.hia_every", 1);
    std::vector<ChildProcess*> done = edges;
    done.push_back(&fog);
    for (const auto& cam : params.cameras) {
      const auto addr =
          ledger::address_of(ledger::KeyPair::from_name(edge_key_name(cam)).public_key());
      const auto want = static_cast<std::uint64_t>(recorded_frames(params.frames, every));
      for (const auto& m : miners) {
        sup.wait_until(
            [&] {
              auto j = get_json(m, "/state/nonce/" + to_hex(addr));
              return j && j->at("nonce").get<std::uint64_t>() >= want;
            },
            slack, fmt::format("{} hashed indices of {} on {}", want, cam, m.to_string()), done);
      }
    }
    std::string digest;
    sup.wait_until(
        [&] {
          std::string first;
          for (const auto& m : miners) {
            auto j = get_json(m, "/state/digest");
            if (!j) return false;
            const std::string d = j->at("canonical_digest").get<std::string>();
            if (first.empty()) {
              first = d;
              result.ledger_height = j->at("height").get<std::uint64_t>();
            } else if (d != first) {
              return false;
            }
          }
          digest = first;
          return true;
        },
        slack, "the miners to agree on the contract state", done);
    result.canonical_digest = digest;
    write_file(out / "ledger-digest.txt", "canonical_digest " + digest + "\n");
    sup.terminate_all();

    std::map<TrackKey, std::size_t> track_actor;
    for (const auto& cam : params.cameras) track_actor.merge(attribute_tracks(scenario, cam, cfg));
    std::vector<EventLine> edge_events;
    for (const auto& cam : params.cameras) {
      auto ev = read_events(out / ("edge-" + cam + ".events"));
      edge_events.insert(edge_events.end(), ev.begin(), ev.end());
    }
    result.metrics =
        compute_metrics(edge_events, read_events(out / "fog.events"), &scenario, &track_actor);
    write_file(out / "metrics.txt", result.metrics.format());
    result.ok = true;
  } catch (const std::exception& e) {
    result.ok = false;
    result.error = e.what();
    spdlog::error("sim: run failed: {}", e.what());
    sup.terminate_all();
  }
  return result;
}

}  // namespace lisps::sim
