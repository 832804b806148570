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

// Registration, authentication, hashed-index recording and verification,
// and capability checks over a LedgerView. Writes go through signed
// transactions; reads see committed state only.

#ifndef LISPS_SECURITY_SERVICES_HPP_
#define LISPS_SECURITY_SERVICES_HPP_

#include <chrono>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <string_view>

#include "lisps/common/time.hpp"
#include "lisps/security/ledger_view.hpp"
#include "lisps/security/token.hpp"

namespace lisps::security {

enum class AuthVerdict { kAccept, kUnregistered, kBadSignature };
enum class HiaStatus { kAuthentic, kTampered, kUnknown };

std::string_view to_string(AuthVerdict v);
std::string_view to_string(HiaStatus s);

struct AccessDecision {
  bool allowed = false;
  std::string reason;  // empty when allowed
  std::int64_t expiry_ms = 0;

  static AccessDecision allow(std::int64_t expiry_ms) { return {true, {}, expiry_ms}; }
  static AccessDecision deny(std::string reason) { return {false, std::move(reason), 0}; }
};

struct RegistrationResult {
  ledger::Receipt receipt;
  std::string vid;  // set when the receipt is ok
};

struct ServiceOptions {
  std::int64_t token_freshness_ms = 30'000;
  // How long submit_and_wait polls for a receipt.
  std::chrono::milliseconds inclusion_timeout{20'000};
  std::chrono::milliseconds poll_period{20};
};

class SecurityServices {
 public:
  SecurityServices(LedgerView& view, const Clock& clock, ServiceOptions options = {});

  LedgerView& view() { return view_; }
  const Clock& clock() const { return clock_; }
  const ServiceOptions& options() const { return options_; }

  // `registrar` must hold manage on "registry".
  RegistrationResult register_entity(const ledger::KeyPair& registrar,
                                     const ledger::Address& address,
                                     const ledger::PublicKey& key);

  AuthVerdict authenticate(std::string_view vid, std::string_view nonce,
                           const ledger::Signature& signature);

  ledger::Receipt record_hashed_index(const ledger::KeyPair& recorder, std::string_view key,
                                      ByteView frame);
  // Signs and submits without waiting for inclusion.
  ledger::SubmitResult submit_hashed_index(const ledger::KeyPair& recorder, std::string_view key,
                                           ByteView frame);
  HiaStatus verify_hashed_index(std::string_view key, ByteView frame);

  ledger::Receipt grant_access(const ledger::KeyPair& admin, std::string_view subject_vid,
                               std::string_view resource, std::uint64_t actions,
                               std::int64_t ttl_ms);

  // Fail-closed: an unreachable ledger denies.
  AccessDecision check_access(const AccessToken& token, std::string_view resource,
                              std::uint64_t actions);

  // Signs with the sender's next nonce.
  ledger::Transaction sign_next(const ledger::KeyPair& key, std::string contract,
                                std::string method, Bytes args);
  // Submits without waiting. A rejection resets the sender's cached nonce;
  // LedgerUnavailable leaves it, so the same transaction can be resent.
  ledger::SubmitResult submit_signed(const ledger::Transaction& tx);
  // Submits and polls until the transaction's receipt is committed.
  ledger::Receipt submit_and_wait(const ledger::Transaction& tx);

 private:
  LedgerView& view_;
  const Clock& clock_;
  ServiceOptions options_;
  std::mutex nonce_mu_;
  std::map<ledger::Address, std::uint64_t> next_nonce_;
};

}  // namespace lisps::security

#endif  // LISPS_SECURITY_SERVICES_HPP_
