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

#ifndef LISPS_COMMON_NET_HPP_
#define LISPS_COMMON_NET_HPP_

#include <string>
#include <string_view>

namespace lisps {

struct Endpoint {
  std::string host = "127.0.0.1";
  int port = 0;

  std::string to_string() const { return host + ":" + std::to_string(port); }
  friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

// Parses "host:port" or ":port". Throws std::invalid_argument.
Endpoint parse_endpoint(std::string_view text);

}  // namespace lisps

#endif  // LISPS_COMMON_NET_HPP_
