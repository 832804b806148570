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


#ifndef LISPS_TOOLS_COMMANDS_HPP_
#define LISPS_TOOLS_COMMANDS_HPP_

#include <CLI11.hpp>

#include <functional>

namespace lisps::tools {

// Each adds its subcommand to `app` and returns the action to run when the
// subcommand was selected. The action returns the process exit code.
using Command = std::function<int()>;

Command add_miner_command(CLI::App& app);
Command add_edge_command(CLI::App& app);
Command add_fog_command(CLI::App& app);
Command add_sim_command(CLI::App& app);
Command add_bench_command(CLI::App& app);
Command add_verify_command(CLI::App& app);

}  // namespace lisps::tools

#endif  // LISPS_TOOLS_COMMANDS_HPP_
