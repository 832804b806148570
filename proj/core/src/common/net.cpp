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

#include "lisps/common/net.hpp"

#include <charconv>
#include <stdexcept>

namespace lisps {

Endpoint parse_endpoint(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("endpoint must be host:port: " + std::string(text));
  }
  Endpoint e;
  if (colon > 0) e.host = std::string(text.substr(0, colon));
  const std::string_view p = text.substr(colon + 1);
  auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), e.port);
  if (ec != std::errc() || ptr != p.data() + p.size() || e.port < 0 || e.port > 65535) {
    throw std::invalid_argument("bad port in endpoint: " + std::string(text));
  }
  return e;
}

}  // namespace lisps
