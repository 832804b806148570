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


#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "acceptance/suite.hpp"

int main(int argc, char** argv) {
  lisps::acceptance::SuiteOptions opts;
  opts.cli = LISPS_CLI_PATH;
  opts.work_dir = std::filesystem::current_path() / "acceptance-out";
  for (int i = 1; i < argc; ++i) opts.only.insert(std::atoi(argv[i]));
  std::filesystem::create_directories(opts.work_dir);
  const auto outcomes = lisps::acceptance::run_suite(opts, std::cout);
  std::size_t passed = 0;
  for (const auto& o : outcomes) passed += o.pass ? 1 : 0;
  std::cout << passed << "/" << outcomes.size() << " criteria passed" << std::endl;
  return passed == outcomes.size() ? EXIT_SUCCESS : EXIT_FAILURE;
}
