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


#ifndef LISPS_TOOLS_COMMON_HPP_
#define LISPS_TOOLS_COMMON_HPP_

#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "lisps/common/config.hpp"
#include "lisps/ledger/crypto.hpp"

namespace lisps::tools {

// Blocks SIGINT and SIGTERM in the calling thread and every thread it
// starts later. Call first thing in main().
void block_shutdown_signals();

// Waits for SIGINT or SIGTERM on a dedicated thread.
class ShutdownSignal {
 public:
  ShutdownSignal();
  ~ShutdownSignal();

  bool received() const { return received_.load(); }
  // Blocks until a signal arrives.
  void wait() const;
  // Runs `f` on the signal thread when a signal arrives.
  void on_signal(std::function<void()> f);

 private:
  std::atomic<bool> received_{false};
  std::atomic<bool> done_{false};
  mutable std::mutex mu_;
  std::function<void()> callback_;
  std::thread thread_;
};

struct ConfigFlags {
  std::string path;
  std::vector<std::string> overrides;
};

void add_config_flags(CLI::App& app, ConfigFlags& flags);
// The config file, if any, with every override applied.
Config load_config(const ConfigFlags& flags);

struct KeyFlags {
  std::string name;
  std::string file;
};

// --key <name> derives a key from a name; --key-file reads a hex seed.
void add_key_flags(CLI::App& app, KeyFlags& flags, bool required);
std::optional<ledger::KeyPair> load_key(const KeyFlags& flags);

// Line-oriented append-only log, flushed after each write.
class LineLog {
 public:
  explicit LineLog(const std::filesystem::path& path);
  ~LineLog();
  void write(const std::string& lines);

 private:
  std::mutex mu_;
  std::FILE* f_ = nullptr;
};

void init_logging(const std::string& service);

}  // namespace lisps::tools

#endif  // LISPS_TOOLS_COMMON_HPP_
