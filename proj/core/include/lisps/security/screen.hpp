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

// Screening in front of a protected resource. Decisions come from
// SecurityServices::check_access; allow decisions are cached per
// (token, resource, actions) until the earliest of one cache period, grant
// expiry, and token staleness. Denials are never cached.

#ifndef LISPS_SECURITY_SCREEN_HPP_
#define LISPS_SECURITY_SCREEN_HPP_

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <tuple>

#include "lisps/security/services.hpp"

namespace lisps::security {

class AccessScreen {
 public:
  // `cache_ms` is normally the block interval.
  AccessScreen(SecurityServices& services, std::int64_t cache_ms);

  // `token_header` is the raw header value, empty if absent.
  AccessDecision check(std::string_view token_header, std::string_view resource,
                       std::uint64_t actions);

  std::size_t cached() const;
  void clear();

 private:
  using Key = std::tuple<std::string, std::string, std::uint64_t>;
  struct Entry {
    std::int64_t valid_until_ms = 0;
    AccessDecision decision;
  };

  SecurityServices& services_;
  std::int64_t cache_ms_;
  mutable std::mutex mu_;
  std::map<Key, Entry> cache_;
};

}  // namespace lisps::security

#endif  // LISPS_SECURITY_SCREEN_HPP_
