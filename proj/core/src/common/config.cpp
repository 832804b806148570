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

#include "lisps/common/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <fstream>
#include <sstream>

namespace lisps {

namespace pt = boost::property_tree;

Config Config::parse(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config: " + std::string(e.what()));
  }
  Config cfg;
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      cfg.set(name, node.data());
      continue;
    }
    for (const auto& [key, leaf] : node) cfg.set(name + "." + key, leaf.data());
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::optional<std::string> Config::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  auto v = get(key);
  return v ? *v : fallback;
}

double Config::get_double(const std::string& key, double fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  try {
    std::size_t used = 0;
    double d = std::stod(*v, &used);
    if (used != v->size()) throw std::invalid_argument(*v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + " is not a number: '" + *v + "'");
  }
}

long long Config::get_int(const std::string& key, long long fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  try {
    std::size_t used = 0;
    long long n = std::stoll(*v, &used);
    if (used != v->size()) throw std::invalid_argument(*v);
    return n;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + " is not an integer: '" + *v + "'");
  }
}

std::vector<std::pair<std::string, std::string>> Config::with_prefix(
    const std::string& section, const std::string& prefix) const {
  std::vector<std::pair<std::string, std::string>> out;
  const std::string full = section + "." + prefix;
  for (const auto& key : order_) {
    if (key.rfind(full, 0) == 0) out.emplace_back(key.substr(section.size() + 1), values_.at(key));
  }
  return out;
}

void Config::set(const std::string& key, std::string value) {
  if (values_.count(key) == 0) order_.push_back(key);
  values_[key] = std::move(value);
}

void Config::set_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("config: override must be section.key=value: " + assignment);
  }
  set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

std::string Config::to_text() const {
  std::map<std::string, std::vector<std::string>> sections;
  std::vector<std::string> section_order;
  std::string out;
  for (const auto& key : order_) {
    const auto dot = key.find('.');
    if (dot == std::string::npos) {
      out += key + " = " + values_.at(key) + "\n";
      continue;
    }
    const std::string section = key.substr(0, dot);
    if (sections.count(section) == 0) section_order.push_back(section);
    sections[section].push_back(key);
  }
  for (const auto& section : section_order) {
    if (!out.empty()) out += "\n";
    out += "[" + section + "]\n";
    for (const auto& key : sections[section]) {
      out += key.substr(section.size() + 1) + " = " + values_.at(key) + "\n";
    }
  }
  return out;
}

}  // namespace lisps
