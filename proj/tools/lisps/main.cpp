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

#include <exception>
#include <map>

#include "commands.hpp"
#include "common.hpp"

int main(int argc, char** argv) {
  lisps::tools::block_shutdown_signals();

  CLI::App app{"LISPS smart surveillance services"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  std::map<CLI::App*, lisps::tools::Command> commands;
  auto add = [&](lisps::tools::Command (*make)(CLI::App&)) {
    const std::size_t before = app.get_subcommands({}).size();
    lisps::tools::Command run = make(app);
    commands[app.get_subcommands({})[before]] = std::move(run);
  };
  add(lisps::tools::add_miner_command);
  add(lisps::tools::add_edge_command);
  add(lisps::tools::add_fog_command);
  add(lisps::tools::add_sim_command);
  add(lisps::tools::add_bench_command);
  add(lisps::tools::add_verify_command);

  CLI11_PARSE(app, argc, argv);

  try {
    for (auto& [sub, run] : commands) {
      if (sub->parsed()) return run();
    }
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 2;
}
