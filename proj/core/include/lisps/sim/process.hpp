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


#ifndef LISPS_SIM_PROCESS_HPP_
#define LISPS_SIM_PROCESS_HPP_

#include <sys/types.h>

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace lisps::sim {

// A supervised child process with stdout and stderr appended to a log
// file. The child receives SIGTERM if the supervisor dies.
class ChildProcess {
 public:
  // Throws std::system_error when the process cannot be started.
  ChildProcess(std::string name, const std::vector<std::string>& argv,
               const std::filesystem::path& log_path);
  ~ChildProcess();

  ChildProcess(const ChildProcess&) = delete;
  ChildProcess& operator=(const ChildProcess&) = delete;

  const std::string& name() const { return name_; }
  const std::filesystem::path& log_path() const { return log_; }
  pid_t pid() const { return pid_; }

  // Exit status once the child has exited: the exit code, or 128 + signal.
  std::optional<int> poll();
  std::optional<int> wait(std::chrono::milliseconds timeout);
  // SIGTERM, then SIGKILL after `grace`. Returns the exit status.
  int terminate(std::chrono::milliseconds grace = std::chrono::seconds(5));

 private:
  std::string name_;
  std::filesystem::path log_;
  pid_t pid_ = -1;
  std::optional<int> status_;
};

// A port that was free on 127.0.0.1 when probed.
int pick_free_port();

}  // namespace lisps::sim

#endif  // LISPS_SIM_PROCESS_HPP_
