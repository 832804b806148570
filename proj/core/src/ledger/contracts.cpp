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

#include "lisps/ledger/contracts.hpp"

#include "lisps/ledger/encoding.hpp"

namespace lisps::ledger {

namespace {

struct ContractFailure {
  std::string message;
};

void require_manage(const ContractState& s, const Identity& sender, std::string_view resource,
                    std::int64_t now_ms) {
  if (!s.allows(sender.vid, resource, kManage, now_ms)) {
    throw ContractFailure{"denied: no manage grant on '" + std::string(resource) + "'"};
  }
}

void apply_register(ContractState& s, const Identity& sender, Decoder& d, const ApplyContext& ctx) {
  const Address address = d.fixed<32>();
  const PublicKey key = d.fixed<32>();
  d.expect_done();
  require_manage(s, sender, "registry", ctx.timestamp_ms);
  if (address_of(key) != address) throw ContractFailure{"address does not match key"};
  if (s.registry.count(address) != 0) throw ContractFailure{"already registered"};
  const std::string vid = vid_of(address);
  if (s.vids.count(vid) != 0) throw ContractFailure{"vid collision"};
  s.registry[address] = Identity{vid, key, ctx.height};
  s.vids[vid] = address;
}

void apply_hia_record(ContractState& s, const Identity& sender, Decoder& d,
                      const ApplyContext& ctx) {
  const std::string key = d.str();
  const Hash32 hash = d.fixed<32>();
  d.expect_done();
  auto resource = hia_resource(key);
  if (!resource) throw ContractFailure{"malformed key"};
  require_manage(s, sender, *resource, ctx.timestamp_ms);
  if (s.hia.count(key) != 0) throw ContractFailure{"already recorded"};
  s.hia[key] = HiaEntry{hash, sender.vid, ctx.height};
}

void apply_acl_grant(ContractState& s, const Identity& sender, Decoder& d,
                     const ApplyContext& ctx) {
  const std::string vid = d.str();
  const std::string resource = d.str();
  const std::uint64_t actions = d.u64();
  const std::int64_t expiry = d.i64();
  d.expect_done();
  require_manage(s, sender, resource, ctx.timestamp_ms);
  if (s.identity(vid) == nullptr) throw ContractFailure{"unknown subject"};
  if (actions == 0 || (actions & ~std::uint64_t{kRead | kManage}) != 0) {
    throw ContractFailure{"bad actions"};
  }
  if (expiry <= ctx.timestamp_ms) throw ContractFailure{"expiry not after grant time"};
  s.acl[{vid, resource}] = Grant{actions, expiry, ctx.height};
}

void encode_state(Encoder& e, const ContractState& s, bool with_timing) {
  e.u32(static_cast<std::uint32_t>(s.registry.size()));
  for (const auto& [addr, id] : s.registry) {
    e.fixed(addr).str(id.vid).fixed(id.public_key);
    if (with_timing) e.u64(id.height);
  }
  e.u32(static_cast<std::uint32_t>(s.hia.size()));
  for (const auto& [key, entry] : s.hia) {
    e.str(key).fixed(entry.hash).str(entry.recorder);
    if (with_timing) e.u64(entry.height);
  }
  e.u32(static_cast<std::uint32_t>(s.acl.size()));
  for (const auto& [k, g] : s.acl) {
    e.str(k.first).str(k.second).u64(g.actions);
    if (with_timing) e.i64(g.expiry_ms).u64(g.height);
  }
  e.u32(static_cast<std::uint32_t>(s.nonces.size()));
  for (const auto& [addr, n] : s.nonces) e.fixed(addr).u64(n);
}

}  // namespace

bool resource_covers(std::string_view grant, std::string_view resource) {
  if (grant.empty()) return true;
  if (resource.substr(0, grant.size()) != grant) return false;
  return resource.size() == grant.size() || resource[grant.size()] == '/';
}

bool grant_allows(std::string_view grant_resource, const Grant& grant, std::string_view resource,
                  std::uint64_t actions, std::int64_t now_ms) {
  return resource_covers(grant_resource, resource) && (grant.actions & actions) == actions &&
         grant.expiry_ms > now_ms;
}

const Identity* ContractState::identity(const Address& a) const {
  auto it = registry.find(a);
  return it == registry.end() ? nullptr : &it->second;
}

const Identity* ContractState::identity(std::string_view vid) const {
  auto it = vids.find(std::string(vid));
  return it == vids.end() ? nullptr : identity(it->second);
}

std::uint64_t ContractState::nonce(const Address& a) const {
  auto it = nonces.find(a);
  return it == nonces.end() ? 0 : it->second;
}

bool ContractState::allows(std::string_view vid, std::string_view resource, std::uint64_t actions,
                           std::int64_t now_ms, std::int64_t* expiry) const {
  bool found = false;
  std::int64_t best = 0;
  const std::string v(vid);
  // Grants for one vid are contiguous in the map.
  for (auto it = acl.lower_bound({v, std::string()}); it != acl.end() && it->first.first == v;
       ++it) {
    const Grant& g = it->second;
    if (!grant_allows(it->first.second, g, resource, actions, now_ms)) continue;
    // A later expiry is the one that keeps access alive.
    if (!found || g.expiry_ms > best) best = g.expiry_ms;
    found = true;
  }
  if (found && expiry != nullptr) *expiry = best;
  return found;
}

Hash32 ContractState::digest() const {
  Encoder e;
  encode_state(e, *this, true);
  return sha256(ByteView(e.out()));
}

Hash32 ContractState::canonical_digest() const {
  Encoder e;
  encode_state(e, *this, false);
  return sha256(ByteView(e.out()));
}

Receipt apply_transaction(ContractState& state, const Transaction& tx, const ApplyContext& ctx) {
  Receipt r{tx.id(), ctx.height, false, {}};
  state.nonces[tx.sender] = tx.nonce;
  const Identity* sender = state.identity(tx.sender);
  if (sender == nullptr) {
    r.message = "unregistered sender";
    return r;
  }
  // Each method checks everything before its single write.
  try {
    Decoder d(tx.args);
    if (tx.contract == "registry" && tx.method == "register") {
      apply_register(state, *sender, d, ctx);
    } else if (tx.contract == "hia" && tx.method == "record") {
      apply_hia_record(state, *sender, d, ctx);
    } else if (tx.contract == "acl" && tx.method == "grant") {
      apply_acl_grant(state, *sender, d, ctx);
    } else {
      throw ContractFailure{"unknown method " + tx.contract + "." + tx.method};
    }
  } catch (const ContractFailure& f) {
    r.message = f.message;
    return r;
  } catch (const EncodingError& e) {
    r.message = std::string("bad arguments: ") + e.what();
    return r;
  }
  r.ok = true;
  r.message = "ok";
  return r;
}

void seed_identity(ContractState& state, const PublicKey& key) {
  const Address a = address_of(key);
  const std::string vid = vid_of(a);
  state.registry[a] = Identity{vid, key, 0};
  state.vids[vid] = a;
}

void seed_grant(ContractState& state, const std::string& vid, const std::string& resource,
                std::uint64_t actions, std::int64_t expiry_ms) {
  state.acl[{vid, resource}] = Grant{actions, expiry_ms, 0};
}

Bytes register_args(const Address& address, const PublicKey& key) {
  return Encoder().fixed(address).fixed(key).take();
}

Bytes hia_record_args(std::string_view key, const Hash32& hash) {
  return Encoder().str(key).fixed(hash).take();
}

Bytes acl_grant_args(std::string_view vid, std::string_view resource, std::uint64_t actions,
                     std::int64_t expiry_ms) {
  return Encoder().str(vid).str(resource).u64(actions).i64(expiry_ms).take();
}

std::string hia_key(std::string_view camera_id, std::int64_t frame_index) {
  return std::string(camera_id) + "/frame/" + std::to_string(frame_index);
}

std::optional<std::string> hia_resource(std::string_view key) {
  const auto pos = key.find("/frame/");
  if (pos == std::string_view::npos || pos == 0) return std::nullopt;
  const std::string_view idx = key.substr(pos + 7);
  if (idx.empty() || idx.find_first_not_of("0123456789") != std::string_view::npos) {
    return std::nullopt;
  }
  const std::string_view cam = key.substr(0, pos);
  if (cam.find('/') != std::string_view::npos) return std::nullopt;
  return "camera/" + std::string(cam);
}

}  // namespace lisps::ledger
