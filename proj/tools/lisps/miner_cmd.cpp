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


#include <httplib.h>
#include <spdlog/spdlog.h>

#include <fstream>
#include <memory>
#include <sstream>

#include "commands.hpp"
#include "common.hpp"
#include "lisps/common/net.hpp"
#include "lisps/ledger/node.hpp"
#include "lisps/security/http.hpp"
#include "lisps/security/ledger_view.hpp"
#include "lisps/security/services.hpp"

namespace lisps::tools {

namespace {

struct MinerFlags {
  ConfigFlags config;
  KeyFlags key;
  std::string genesis;
  std::string listen = "127.0.0.1:7000";
  std::vector<std::string> peers;
  std::string registrar;
  bool observer = false;
};

int run_miner(const MinerFlags& f) {
  init_logging("miner");
  const Config cfg = load_config(f.config);
  std::ifstream in(f.genesis);
  std::stringstream text;
  text << in.rdbuf();

  ledger::NodeOptions opts;
  opts.genesis = ledger::GenesisConfig::from_json(text.str());
  opts.listen = parse_endpoint(f.listen);
  for (const auto& p : f.peers) opts.peers.push_back(parse_endpoint(p));
  opts.sync_period_ms = cfg.get_int("ledger.sync_period_ms", opts.sync_period_ms);
  opts.miner = load_key(f.key);
  if (f.observer) opts.miner.reset();

  ledger::LedgerNode node(std::move(opts));
  SystemClock clock;
  security::LocalLedgerView view(node);
  security::SecurityServices services(view, clock);
  std::optional<ledger::KeyPair> registrar;
  if (!f.registrar.empty()) registrar = ledger::KeyPair::from_name(f.registrar);
  node.mount([&](httplib::Server& s) { security::mount_security_routes(s, services, registrar); });

  ShutdownSignal signal;
  node.bind();
  node.start(!f.observer);
  spdlog::info("ledger node listening on {}", node.endpoint().to_string());
  signal.wait();
  node.stop();
  spdlog::info("ledger node stopped at height {}", node.snapshot()->height);
  return 0;
}

}  // namespace

Command add_miner_command(CLI::App& app) {
  auto flags = std::make_shared<MinerFlags>();
  CLI::App* sub = app.add_subcommand("miner", "Run a ledger node with the security services");
  add_config_flags(*sub, flags->config);
  add_key_flags(*sub, flags->key, false);
  sub->add_option("--genesis", flags->genesis, "Genesis JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--listen", flags->listen, "Address to serve on, host:port");
  sub->add_option("--peer", flags->peers, "Peer node, host:port");
  sub->add_option("--registrar", flags->registrar,
                  "Key name used to sign registrations posted to /register");
  sub->add_flag("--observer", flags->observer, "Follow the chain without producing blocks");
  return [flags] { return run_miner(*flags); };
}

}  // namespace lisps::tools
