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


#include "common.hpp"

#include <signal.h>
#include <spdlog/spdlog.h>

#include <cerrno>
#include <chrono>
#include <ctime>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace lisps::tools {

namespace {

sigset_t shutdown_set() {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  return set;
}

}  // namespace

void block_shutdown_signals() {
  const sigset_t set = shutdown_set();
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
}

ShutdownSignal::ShutdownSignal() {
  thread_ = std::thread([this] {
    const sigset_t set = shutdown_set();
    const timespec tick{0, 100'000'000};
    while (!done_.load()) {
      const int sig = sigtimedwait(&set, nullptr, &tick);
      if (sig < 0) continue;
      spdlog::info("received signal {}, shutting down", sig);
      received_.store(true);
      std::function<void()> f;
      {
        std::lock_guard lock(mu_);
        f = callback_;
      }
      if (f) f();
      return;
    }
  });
}

ShutdownSignal::~ShutdownSignal() {
  done_.store(true);
  if (thread_.joinable()) thread_.join();
}

void ShutdownSignal::wait() const {
  while (!received_.load()) std::this_thread::sleep_for(std::chrono::milliseconds(50));
}

void ShutdownSignal::on_signal(std::function<void()> f) {
  std::lock_guard lock(mu_);
  callback_ = std::move(f);
}

void add_config_flags(CLI::App& app, ConfigFlags& flags) {
  app.add_option("--config", flags.path, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--set", flags.overrides, "Override a config value, section.key=value");
}

Config load_config(const ConfigFlags& flags) {
  Config cfg = flags.path.empty() ? Config() : Config::load(flags.path);
  for (const auto& o : flags.overrides) cfg.set_override(o);
  return cfg;
}

void add_key_flags(CLI::App& app, KeyFlags& flags, bool required) {
  auto* name = app.add_option("--key", flags.name, "Derive the signing key from this name");
  auto* file = app.add_option("--key-file", flags.file, "File holding a 32-byte hex key seed")
                   ->check(CLI::ExistingFile);
  name->excludes(file);
  if (required) {
    auto* group = app.add_option_group("key");
    group->add_option(name);
    group->add_option(file);
    group->require_option(1);
  }
}

std::optional<ledger::KeyPair> load_key(const KeyFlags& flags) {
  if (!flags.name.empty()) return ledger::KeyPair::from_name(flags.name);
  if (flags.file.empty()) return std::nullopt;
  std::ifstream in(flags.file);
  std::string hex;
  in >> hex;
  auto seed = fixed_from_hex<32>(hex);
  if (!seed) throw std::invalid_argument("key file must hold 64 hex digits: " + flags.file);
  return ledger::KeyPair(*seed);
}

LineLog::LineLog(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  f_ = std::fopen(path.c_str(), "ab");
  if (f_ == nullptr) throw std::system_error(errno, std::generic_category(), path.string());
}

LineLog::~LineLog() {
  if (f_ != nullptr) std::fclose(f_);
}

void LineLog::write(const std::string& lines) {
  std::lock_guard lock(mu_);
  std::fwrite(lines.data(), 1, lines.size(), f_);
  std::fflush(f_);
}

void init_logging(const std::string& service) {
  spdlog::set_pattern("%Y-%m-%dT%H:%M:%S.%e %^%l%$ [" + service + "] %v");
}

}  // namespace lisps::tools
