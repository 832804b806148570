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


// The acceptance suite behind `lisps bench` and the acceptance test. Each
// criterion prints one PASS or FAIL line with the values it measured.

#ifndef LISPS_TOOLS_ACCEPTANCE_SUITE_HPP_
#define LISPS_TOOLS_ACCEPTANCE_SUITE_HPP_

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "lisps/common/config.hpp"

namespace lisps::acceptance {

inline constexpr int kCriteria = 9;

struct Outcome {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
};

struct SuiteOptions {
  std::filesystem::path cli;       // lisps executable for the multi-process runs
  std::filesystem::path work_dir;  // run outputs land here
  std::set<int> only;              // empty: every criterion
  std::uint64_t seed = 42;
};

// One edge, five objects per frame at 5 FPS for 60 s, three miners.
Config latency_config();
// As latency_config() with ten objects for 30 s.
Config capacity_config();
// One walker, one loiterer and one wanderer without respawns, 60 s.
Config separation_config();
inline constexpr std::uint64_t kSeparationSeed = 7;

std::string format_outcome(const Outcome& o);

// Runs the selected criteria in order, writing each line to `out` as soon
// as the criterion finishes.
std::vector<Outcome> run_suite(const SuiteOptions& options, std::ostream& out);

}  // namespace lisps::acceptance

#endif  // LISPS_TOOLS_ACCEPTANCE_SUITE_HPP_
