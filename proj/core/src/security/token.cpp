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

#include "lisps/security/token.hpp"

#include <charconv>

namespace lisps::security {

Bytes challenge_message(std::string_view nonce, std::string_view vid) {
  Bytes m(nonce.begin(), nonce.end());
  m.insert(m.end(), vid.begin(), vid.end());
  return m;
}

std::optional<AccessToken> AccessToken::parse(std::string_view text) {
  const auto a = text.find(':');
  if (a == std::string_view::npos) return std::nullopt;
  const auto b = text.find(':', a + 1);
  if (b == std::string_view::npos) return std::nullopt;
  AccessToken t;
  t.vid = std::string(text.substr(0, a));
  t.nonce = std::string(text.substr(a + 1, b - a - 1));
  auto sig = fixed_from_hex<64>(text.substr(b + 1));
  if (t.vid.empty() || t.nonce.empty() || !sig) return std::nullopt;
  t.signature = *sig;
  return t;
}

std::string AccessToken::format() const { return vid + ":" + nonce + ":" + to_hex(signature); }

std::optional<std::int64_t> AccessToken::nonce_ms() const {
  if (nonce.empty() || (nonce.size() > 1 && nonce[0] == '0')) return std::nullopt;
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(nonce.data(), nonce.data() + nonce.size(), v);
  if (ec != std::errc() || ptr != nonce.data() + nonce.size() || v < 0) return std::nullopt;
  return v;
}

AccessToken make_token(const ledger::KeyPair& key, Timestamp now) {
  AccessToken t;
  t.vid = ledger::vid_of(ledger::address_of(key.public_key()));
  t.nonce = std::to_string(now.ms);
  t.signature = key.sign(challenge_message(t.nonce, t.vid));
  return t;
}

}  // namespace lisps::security
