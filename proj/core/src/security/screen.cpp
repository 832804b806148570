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

#include "lisps/security/screen.hpp"

#include <algorithm>

namespace lisps::security {

AccessScreen::AccessScreen(SecurityServices& services, std::int64_t cache_ms)
    : services_(services), cache_ms_(cache_ms) {}

AccessDecision AccessScreen::check(std::string_view token_header, std::string_view resource,
                                   std::uint64_t actions) {
  if (token_header.empty()) return AccessDecision::deny("missing token");
  const auto token = AccessToken::parse(token_header);
  if (!token) return AccessDecision::deny("malformed token");

  const std::int64_t now = services_.clock().now().ms;
  Key key{std::string(token_header), std::string(resource), actions};
  {
    std::lock_guard lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) {
      if (now < it->second.valid_until_ms) return it->second.decision;
      cache_.erase(it);
    }
  }

  AccessDecision d = services_.check_access(*token, resource, actions);
  if (d.allowed && cache_ms_ > 0) {
    std::int64_t until = std::min(now + cache_ms_, d.expiry_ms);
    if (auto issued = token->nonce_ms()) {
      until = std::min(until, *issued + services_.options().token_freshness_ms);
    }
    std::lock_guard lock(mu_);
    // Expired entries are dropped lazily; bound the map for token churn.
    if (cache_.size() > 4096) {
      std::erase_if(cache_, [now](const auto& e) { return e.second.valid_until_ms <= now; });
    }
    if (until > now) cache_[std::move(key)] = Entry{until, d};
  }
  return d;
}

std::size_t AccessScreen::cached() const {
  std::lock_guard lock(mu_);
  return cache_.size();
}

void AccessScreen::clear() {
  std::lock_guard lock(mu_);
  cache_.clear();
}

}  // namespace lisps::security
