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


// Multi-process scenario runs on loopback: miners, one edge node per
// camera and a fog node, each started from the CLI binary.
//
// Files written to the output directory:
//   config.cfg         effective configuration handed to every child
//   genesis.json       ledger genesis
//   <child>.log        stdout and stderr of each child
//   edge-<cam>.events  edge frame events
//   fog.events         fog frame and alert events
//   alerts.log         the designated receiver's alert file
//   store/             fog daily stream files and reference store
//   ledger-digest.txt  canonical contract-state digest after the run
//   metrics.txt        Metrics::format()

#ifndef LISPS_SIM_ORCHESTRATOR_HPP_
#define LISPS_SIM_ORCHESTRATOR_HPP_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>

#include "lisps/common/config.hpp"
#include "lisps/sim/metrics.hpp"

namespace lisps::sim {

struct RunOptions {
  std::filesystem::path cli;  // the lisps executable
  Config config;
  std::filesystem::path out_dir;
  std::uint64_t seed = 0;
  // Added to the scenario duration for every wait.
  std::chrono::seconds slack{60};
};

struct RunResult {
  bool ok = false;
  std::string error;
  Metrics metrics;
  std::string canonical_digest;  // hex
  std::uint64_t ledger_height = 0;
};

// Key names used by the harness; keys derive from names.
inline constexpr char kAdminKey[] = "admin";
inline constexpr char kFogKey[] = "fog";
std::string miner_key_name(int index);
std::string edge_key_name(const std::string& camera_id);

// Frames of `frames` that the edge records on the ledger ([edge] hia_every).
std::int64_t recorded_frames(std::int64_t frames, std::int64_t every);

// Never throws; failures are reported in the result.
RunResult run_scenario(const RunOptions& options);

}  // namespace lisps::sim

#endif  // LISPS_SIM_ORCHESTRATOR_HPP_
