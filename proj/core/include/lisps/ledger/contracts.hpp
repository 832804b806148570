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

// Built-in contracts.
//
//   registry.register(address, public_key)
//       sender needs manage on "registry"; address must be SHA-256(key).
//   hia.record(key, hash)
//       key is "<camera>/frame/<index>"; sender needs manage on
//       "camera/<camera>"; write-once.
//   acl.grant(vid, resource, actions, expiry_ms)
//       sender needs manage on the resource; expiry after the block time.
//
// Resources are '/'-separated paths; a grant on "a/b" covers "a/b" and
// everything below it, and the empty resource covers everything.

#ifndef LISPS_LEDGER_CONTRACTS_HPP_
#define LISPS_LEDGER_CONTRACTS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "lisps/ledger/block.hpp"

namespace lisps::ledger {

enum Action : std::uint64_t {
  kRead = 1,
  kManage = 2,
};

inline constexpr std::int64_t kNeverExpires = INT64_MAX;

struct Identity {
  std::string vid;
  PublicKey public_key{};
  std::uint64_t height = 0;
  friend bool operator==(const Identity&, const Identity&) = default;
};

struct HiaEntry {
  Hash32 hash{};
  std::string recorder;  // VID
  std::uint64_t height = 0;
  friend bool operator==(const HiaEntry&, const HiaEntry&) = default;
};

struct Grant {
  std::uint64_t actions = 0;
  std::int64_t expiry_ms = 0;
  std::uint64_t height = 0;
  friend bool operator==(const Grant&, const Grant&) = default;
};

struct ContractState {
  std::map<Address, Identity> registry;
  std::map<std::string, Address> vids;  // reverse index of registry
  std::map<std::string, HiaEntry> hia;
  std::map<std::pair<std::string, std::string>, Grant> acl;  // (vid, resource)
  std::map<Address, std::uint64_t> nonces;                  // last applied nonce

  const Identity* identity(const Address& a) const;
  const Identity* identity(std::string_view vid) const;
  std::uint64_t nonce(const Address& a) const;

  // True if some grant for `vid` on `resource` or an ancestor holds every
  // bit of `actions` and has expiry_ms > now_ms. Returns the latest
  // qualifying expiry through `expiry` when given.
  bool allows(std::string_view vid, std::string_view resource, std::uint64_t actions,
              std::int64_t now_ms, std::int64_t* expiry = nullptr) const;

  // SHA-256 over the canonical encoding of every map.
  Hash32 digest() const;
  // As digest() but without heights and expiries, which depend on timing.
  Hash32 canonical_digest() const;

  friend bool operator==(const ContractState&, const ContractState&) = default;
};

bool resource_covers(std::string_view grant, std::string_view resource);

// True if `grant` on `grant_resource` covers `resource`, holds every bit of
// `actions`, and is unexpired at `now_ms`.
bool grant_allows(std::string_view grant_resource, const Grant& grant, std::string_view resource,
                  std::uint64_t actions, std::int64_t now_ms);

struct Receipt {
  Hash32 tx_id{};
  std::uint64_t height = 0;
  bool ok = false;
  std::string message;
};

struct ApplyContext {
  std::uint64_t height = 0;
  std::int64_t timestamp_ms = 0;
};

// Applies a transaction whose signature and nonce were already checked.
// Contract failures leave the state unchanged apart from the sender's
// nonce and are reported in the receipt.
Receipt apply_transaction(ContractState& state, const Transaction& tx, const ApplyContext& ctx);

// Direct writes used to seed genesis.
void seed_identity(ContractState& state, const PublicKey& key);
void seed_grant(ContractState& state, const std::string& vid, const std::string& resource,
                std::uint64_t actions, std::int64_t expiry_ms);

// Argument encodings.
Bytes register_args(const Address& address, const PublicKey& key);
Bytes hia_record_args(std::string_view key, const Hash32& hash);
Bytes acl_grant_args(std::string_view vid, std::string_view resource, std::uint64_t actions,
                     std::int64_t expiry_ms);

// "<camera>/frame/<index>" and its resource "camera/<camera>".
std::string hia_key(std::string_view camera_id, std::int64_t frame_index);
std::optional<std::string> hia_resource(std::string_view key);

}  // namespace lisps::ledger

#endif  // LISPS_LEDGER_CONTRACTS_HPP_
