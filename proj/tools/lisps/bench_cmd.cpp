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


#include <filesystem>
#include <iostream>
#include <memory>
#include <vector>

#include "acceptance/suite.hpp"
#include "commands.hpp"
#include "common.hpp"

namespace lisps::tools {

namespace {

struct BenchFlags {
  std::vector<int> only;
  std::string out = "bench-out";
  std::uint64_t seed = 42;
};

int run_bench(const BenchFlags& f) {
  init_logging("bench");
  acceptance::SuiteOptions opts;
  opts.cli = std::filesystem::read_symlink("/proc/self/exe");
  opts.work_dir = f.out;
  opts.only.insert(f.only.begin(), f.only.end());
  opts.seed = f.seed;
  std::filesystem::create_directories(opts.work_dir);
  const auto outcomes = acceptance::run_suite(opts, std::cout);
  std::size_t passed = 0;
  for (const auto& o : outcomes) passed += o.pass ? 1 : 0;
  std::cout << passed << "/" << outcomes.size() << " criteria passed" << std::endl;
  return passed == outcomes.size() ? 0 : 1;
}

}  // namespace

Command add_bench_command(CLI::App& app) {
  auto flags = std::make_shared<BenchFlags>();
  CLI::App* sub = app.add_subcommand("bench", "Run the acceptance suite");
  sub->add_option("--only", flags->only, "Criterion numbers to run")
      ->check(CLI::Range(1, acceptance::kCriteria));
  sub->add_option("--out", flags->out, "Directory for run outputs");
  sub->add_option("--seed", flags->seed, "Seed for the orchestrated runs and fuzzing");
  return [flags] { return run_bench(*flags); };
}

}  // namespace lisps::tools
