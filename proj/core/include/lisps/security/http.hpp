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

// HTTP endpoints for the security services and a client for them.
//
//   POST /register      {"public_key"}            -> {"ok", "message", "vid", "address"}
//   POST /authenticate  {"vid", "nonce", "signature"} -> {"verdict"}
//   POST /hia/record    {"tx"}                    -> receipt
//   POST /hia/verify    {"key", "frame"}          -> {"result"}
//   POST /acl/grant     {"tx"}                    -> receipt
//   GET  /acl/check?vid=&res=&act=  (X-LISPS-Token) -> 200 allow | 403 deny
//
// Binary values are lowercase hex. Transactions are client-signed.

#ifndef LISPS_SECURITY_HTTP_HPP_
#define LISPS_SECURITY_HTTP_HPP_

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

#include "lisps/common/net.hpp"
#include "lisps/security/services.hpp"

namespace httplib {
class Server;
}

namespace lisps::security {

// `registrar` signs registrations; without one POST /register fails.
void mount_security_routes(httplib::Server& server, SecurityServices& services,
                           std::optional<ledger::KeyPair> registrar);

// Parses "read", "manage", "read,manage", or a decimal bit mask.
std::optional<std::uint64_t> parse_actions(std::string_view text);

class SecurityClient {
 public:
  explicit SecurityClient(Endpoint endpoint,
                          std::chrono::milliseconds timeout = std::chrono::milliseconds(30'000));

  RegistrationResult register_key(const ledger::PublicKey& key);
  AuthVerdict authenticate(const AccessToken& token);
  ledger::Receipt record(const ledger::Transaction& tx);
  HiaStatus verify(std::string_view key, ByteView frame);
  ledger::Receipt grant(const ledger::Transaction& tx);
  AccessDecision check(const AccessToken& token, std::string_view resource,
                       std::string_view actions);

 private:
  Endpoint endpoint_;
  std::chrono::milliseconds timeout_;
};

}  // namespace lisps::security

#endif  // LISPS_SECURITY_HTTP_HPP_
