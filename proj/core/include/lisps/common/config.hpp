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

#ifndef LISPS_COMMON_CONFIG_HPP_
#define LISPS_COMMON_CONFIG_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lisps {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Line-oriented `key = value` configuration with `[section]` headers.
// Lookups use "section.key". Unknown keys are ignored by consumers, so a
// single file can configure every service.
class Config {
 public:
  Config() = default;

  static Config parse(const std::string& text);
  static Config load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;

  // All keys of `section` whose name starts with `prefix`, in file order.
  std::vector<std::pair<std::string, std::string>> with_prefix(
      const std::string& section, const std::string& prefix) const;

  void set(const std::string& key, std::string value);
  // Applies a "section.key=value" override.
  void set_override(const std::string& assignment);

  // INI text that parses back to the same values.
  std::string to_text() const;

 private:
  std::map<std::string, std::string> values_;
  std::vector<std::string> order_;
};

}  // namespace lisps

#endif  // LISPS_COMMON_CONFIG_HPP_
