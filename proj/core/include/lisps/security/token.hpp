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

// Authentication tokens: "<vid>:<nonce>:<signature-hex>", where the nonce
// is the caller's clock in decimal milliseconds and the signature covers
// the nonce followed by the vid.

#ifndef LISPS_SECURITY_TOKEN_HPP_
#define LISPS_SECURITY_TOKEN_HPP_

#include <optional>
#include <string>
#include <string_view>

#include "lisps/common/bytes.hpp"
#include "lisps/common/time.hpp"
#include "lisps/ledger/crypto.hpp"

namespace lisps::security {

inline constexpr char kTokenHeader[] = "X-LISPS-Token";

Bytes challenge_message(std::string_view nonce, std::string_view vid);

struct AccessToken {
  std::string vid;
  std::string nonce;
  ledger::Signature signature{};

  static std::optional<AccessToken> parse(std::string_view text);
  std::string format() const;
  // The nonce as milliseconds, if it is a canonical decimal integer.
  std::optional<std::int64_t> nonce_ms() const;
};

AccessToken make_token(const ledger::KeyPair& key, Timestamp now);

}  // namespace lisps::security

#endif  // LISPS_SECURITY_TOKEN_HPP_
