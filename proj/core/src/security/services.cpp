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

#include "lisps/security/services.hpp"

#include <thread>

#include "lisps/ledger/contracts.hpp"

namespace lisps::security {

std::string_view to_string(AuthVerdict v) {
  switch (v) {
    case AuthVerdict::kAccept: return "accept";
    case AuthVerdict::kUnregistered: return "unregistered";
    case AuthVerdict::kBadSignature: return "bad signature";
  }
  return "unknown";
}

std::string_view to_string(HiaStatus s) {
  switch (s) {
    case HiaStatus::kAuthentic: return "authentic";
    case HiaStatus::kTampered: return "tampered";
    case HiaStatus::kUnknown: return "unknown";
  }
  return "unknown";
}

SecurityServices::SecurityServices(LedgerView& view, const Clock& clock, ServiceOptions options)
    : view_(view), clock_(clock), options_(options) {}

ledger::Transaction SecurityServices::sign_next(const ledger::KeyPair& key, std::string contract,
                                                std::string method, Bytes args) {
  const ledger::Address sender = ledger::address_of(key.public_key());
  std::uint64_t nonce = 0;
  {
    std::lock_guard lock(nonce_mu_);
    auto it = next_nonce_.find(sender);
    nonce = it == next_nonce_.end() ? view_.nonce(sender) + 1 : it->second;
    next_nonce_[sender] = nonce + 1;
  }
  return ledger::make_transaction(key, nonce, std::move(contract), std::move(method),
                                  std::move(args));
}

ledger::Receipt SecurityServices::submit_and_wait(const ledger::Transaction& tx) {
  const ledger::SubmitResult r = view_.submit(tx);
  if (!r.accepted) {
    // The nonce was not consumed; resynchronize from the ledger next time.
    std::lock_guard lock(nonce_mu_);
    next_nonce_.erase(tx.sender);
    return ledger::Receipt{r.tx_id, 0, false, r.error};
  }
  const auto deadline = std::chrono::steady_clock::now() + options_.inclusion_timeout;
  for (;;) {
    if (auto receipt = view_.receipt(r.tx_id)) return *receipt;
    if (std::chrono::steady_clock::now() >= deadline) {
      throw LedgerUnavailable("transaction " + to_hex(r.tx_id) + " not included in time");
    }
    std::this_thread::sleep_for(options_.poll_period);
  }
}

RegistrationResult SecurityServices::register_entity(const ledger::KeyPair& registrar,
                                                     const ledger::Address& address,
                                                     const ledger::PublicKey& key) {
  RegistrationResult out;
  out.receipt = submit_and_wait(
      sign_next(registrar, "registry", "register", ledger::register_args(address, key)));
  if (out.receipt.ok) out.vid = ledger::vid_of(address);
  return out;
}

AuthVerdict SecurityServices::authenticate(std::string_view vid, std::string_view nonce,
                                           const ledger::Signature& signature) {
  auto id = view_.identity(vid);
  if (!id) return AuthVerdict::kUnregistered;
  return ledger::verify(id->public_key, challenge_message(nonce, vid), signature)
             ? AuthVerdict::kAccept
             : AuthVerdict::kBadSignature;
}

ledger::SubmitResult SecurityServices::submit_hashed_index(const ledger::KeyPair& recorder,
                                                           std::string_view key, ByteView frame) {
  return submit_signed(
      sign_next(recorder, "hia", "record", ledger::hia_record_args(key, ledger::sha256(frame))));
}

ledger::SubmitResult SecurityServices::submit_signed(const ledger::Transaction& tx) {
  auto r = view_.submit(tx);
  if (!r.accepted) {
    std::lock_guard lock(nonce_mu_);
    next_nonce_.erase(tx.sender);
  }
  return r;
}

ledger::Receipt SecurityServices::record_hashed_index(const ledger::KeyPair& recorder,
                                                      std::string_view key, ByteView frame) {
  return submit_and_wait(sign_next(recorder, "hia", "record",
                                   ledger::hia_record_args(key, ledger::sha256(frame))));
}

HiaStatus SecurityServices::verify_hashed_index(std::string_view key, ByteView frame) {
  auto entry = view_.hia(key);
  if (!entry) return HiaStatus::kUnknown;
  return entry->hash == ledger::sha256(frame) ? HiaStatus::kAuthentic : HiaStatus::kTampered;
}

ledger::Receipt SecurityServices::grant_access(const ledger::KeyPair& admin,
                                               std::string_view subject_vid,
                                               std::string_view resource, std::uint64_t actions,
                                               std::int64_t ttl_ms) {
  const std::int64_t expiry =
      ttl_ms == ledger::kNeverExpires ? ledger::kNeverExpires : clock_.now().ms + ttl_ms;
  return submit_and_wait(sign_next(admin, "acl", "grant",
                                   ledger::acl_grant_args(subject_vid, resource, actions, expiry)));
}

AccessDecision SecurityServices::check_access(const AccessToken& token, std::string_view resource,
                                              std::uint64_t actions) {
  const std::int64_t now = clock_.now().ms;
  const auto issued = token.nonce_ms();
  if (!issued) return AccessDecision::deny("malformed nonce");
  if (*issued > now + options_.token_freshness_ms ||
      now - *issued > options_.token_freshness_ms) {
    return AccessDecision::deny("stale token");
  }
  try {
    switch (authenticate(token.vid, token.nonce, token.signature)) {
      case AuthVerdict::kUnregistered: return AccessDecision::deny("unregistered");
      case AuthVerdict::kBadSignature: return AccessDecision::deny("bad signature");
      case AuthVerdict::kAccept: break;
    }
    std::optional<std::int64_t> best;
    for (const auto& [res, grant] : view_.grants(token.vid)) {
      if (!ledger::grant_allows(res, grant, resource, actions, now)) continue;
      if (!best || grant.expiry_ms > *best) best = grant.expiry_ms;
    }
    if (!best) return AccessDecision::deny("no grant");
    return AccessDecision::allow(*best);
  } catch (const LedgerUnavailable&) {
    return AccessDecision::deny("ledger unavailable");
  }
}

}  // namespace lisps::security
