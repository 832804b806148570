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

#include "lisps/ledger/chain.hpp"

#include <json.hpp>

#include <stdexcept>

#include "lisps/ledger/encoding.hpp"

namespace lisps::ledger {

namespace {

PublicKey key_from_hex(const std::string& hex) {
  auto k = fixed_from_hex<32>(hex);
  if (!k) throw std::invalid_argument("bad public key hex: " + hex);
  return *k;
}

}  // namespace

void GenesisConfig::validate() const {
  if (miners.empty()) throw std::invalid_argument("genesis: miner set is empty");
  if (block_interval_ms <= 0) throw std::invalid_argument("genesis: block interval must be > 0");
  for (std::size_t i = 0; i < miners.size(); ++i) {
    for (std::size_t j = i + 1; j < miners.size(); ++j) {
      if (miners[i].public_key == miners[j].public_key) {
        throw std::invalid_argument("genesis: duplicate miner key");
      }
    }
  }
}

std::string GenesisConfig::to_json() const {
  nlohmann::ordered_json j;
  j["timestamp_ms"] = timestamp_ms;
  j["block_interval_ms"] = block_interval_ms;
  j["miners"] = nlohmann::ordered_json::array();
  for (const auto& m : miners) {
    j["miners"].push_back({{"name", m.name}, {"public_key", to_hex(m.public_key)}});
  }
  j["identities"] = nlohmann::ordered_json::array();
  for (const auto& k : identities) j["identities"].push_back(to_hex(k));
  j["grants"] = nlohmann::ordered_json::array();
  for (const auto& g : grants) {
    nlohmann::ordered_json e{{"vid", g.vid}, {"resource", g.resource}, {"actions", g.actions}};
    if (g.expiry_ms != kNeverExpires) e["expiry_ms"] = g.expiry_ms;
    j["grants"].push_back(e);
  }
  return j.dump(2) + "\n";
}

GenesisConfig GenesisConfig::from_json(std::string_view text) {
  GenesisConfig g;
  try {
    const auto j = nlohmann::json::parse(text);
    g.timestamp_ms = j.at("timestamp_ms").get<std::int64_t>();
    g.block_interval_ms = j.value("block_interval_ms", std::int64_t{2000});
    for (const auto& m : j.at("miners")) {
      g.miners.push_back({m.at("name").get<std::string>(),
                          key_from_hex(m.at("public_key").get<std::string>())});
    }
    for (const auto& k : j.value("identities", nlohmann::json::array())) {
      g.identities.push_back(key_from_hex(k.get<std::string>()));
    }
    for (const auto& e : j.value("grants", nlohmann::json::array())) {
      g.grants.push_back({e.at("vid").get<std::string>(), e.at("resource").get<std::string>(),
                          e.at("actions").get<std::uint64_t>(),
                          e.value("expiry_ms", kNeverExpires)});
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("genesis: ") + e.what());
  }
  g.validate();
  return g;
}

ContractState GenesisConfig::initial_state() const {
  ContractState s;
  for (const auto& k : identities) seed_identity(s, k);
  for (const auto& g : grants) seed_grant(s, g.vid, g.resource, g.actions, g.expiry_ms);
  return s;
}

std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::kMalformed: return "malformed block";
    case RejectReason::kBadHeight: return "bad height";
    case RejectReason::kBrokenLinkage: return "broken linkage";
    case RejectReason::kBadSlot: return "bad slot";
    case RejectReason::kOutOfTurn: return "out-of-turn proposer";
    case RejectReason::kBadBlockSignature: return "bad block signature";
    case RejectReason::kBadTransactionsHash: return "bad transactions hash";
    case RejectReason::kBadTransactionSignature: return "bad transaction signature";
    case RejectReason::kBadNonce: return "bad nonce";
  }
  return "unknown";
}

std::optional<RejectReason> check_transaction(const ContractState& state, const Transaction& tx) {
  const Identity* sender = state.identity(tx.sender);
  if (sender == nullptr || !verify(sender->public_key, tx.signing_payload(), tx.signature)) {
    return RejectReason::kBadTransactionSignature;
  }
  if (tx.nonce != state.nonce(tx.sender) + 1) return RejectReason::kBadNonce;
  return std::nullopt;
}

Chain::Chain(GenesisConfig genesis) : genesis_(std::move(genesis)) {
  genesis_.validate();
  blocks_.push_back(genesis_block(genesis_.timestamp_ms));
  state_ = genesis_.initial_state();
}

const Receipt* Chain::receipt(const Hash32& tx_id) const {
  auto it = receipts_.find(tx_id);
  return it == receipts_.end() ? nullptr : &it->second;
}

std::int64_t Chain::slot_of(std::int64_t timestamp_ms) const {
  const std::int64_t d = timestamp_ms - genesis_.timestamp_ms;
  return d < 0 ? -1 : d / genesis_.block_interval_ms;
}

std::int64_t Chain::slot_start(std::int64_t slot) const {
  return genesis_.timestamp_ms + slot * genesis_.block_interval_ms;
}

std::size_t Chain::scheduled_miner(std::int64_t slot) const {
  const auto n = static_cast<std::int64_t>(genesis_.miners.size());
  return static_cast<std::size_t>(((slot - 1) % n + n) % n);
}

std::optional<std::size_t> Chain::miner_index(const PublicKey& key) const {
  for (std::size_t i = 0; i < genesis_.miners.size(); ++i) {
    if (genesis_.miners[i].public_key == key) return i;
  }
  return std::nullopt;
}

std::optional<RejectReason> Chain::evaluate(const Block& b, Applied* out) const {
  const Block& parent = head();
  if (b.height != parent.height + 1) return RejectReason::kBadHeight;
  if (b.previous_hash != parent.hash()) return RejectReason::kBrokenLinkage;

  const std::int64_t slot = slot_of(b.timestamp_ms);
  if (slot < 1 || b.timestamp_ms != slot_start(slot) ||
      (parent.height > 0 && slot <= slot_of(parent.timestamp_ms))) {
    return RejectReason::kBadSlot;
  }
  const MinerInfo& owner = genesis_.miners[scheduled_miner(slot)];
  if (b.proposer != address_of(owner.public_key)) return RejectReason::kOutOfTurn;
  const Hash32 h = b.hash();
  if (!verify(owner.public_key, h, b.signature)) return RejectReason::kBadBlockSignature;
  if (b.transactions_hash != transactions_hash(b.transactions)) {
    return RejectReason::kBadTransactionsHash;
  }

  Applied a{state_, {}};
  const ApplyContext ctx{b.height, b.timestamp_ms};
  for (const auto& tx : b.transactions) {
    if (auto bad = check_transaction(a.state, tx)) return bad;
    a.receipts.push_back(apply_transaction(a.state, tx, ctx));
  }
  if (out != nullptr) *out = std::move(a);
  return std::nullopt;
}

std::optional<RejectReason> Chain::validate(const Block& b) const { return evaluate(b, nullptr); }

std::optional<RejectReason> Chain::validate_and_append(const Block& b) {
  Applied a;
  if (auto bad = evaluate(b, &a)) return bad;
  blocks_.push_back(b);
  state_ = std::move(a.state);
  for (auto& r : a.receipts) receipts_[r.tx_id] = std::move(r);
  return std::nullopt;
}

Block Chain::propose(const KeyPair& miner, std::int64_t slot, std::span<const Transaction> pending,
                     std::vector<Transaction>* excluded) const {
  if (slot < 1 || (height() > 0 && slot <= slot_of(head().timestamp_ms))) {
    throw std::logic_error("propose: slot is not after the head");
  }
  const MinerInfo& owner = genesis_.miners[scheduled_miner(slot)];
  if (owner.public_key != miner.public_key()) throw std::logic_error("propose: out of turn");

  Block b;
  b.height = height() + 1;
  b.previous_hash = head().hash();
  b.timestamp_ms = slot_start(slot);
  b.proposer = address_of(miner.public_key());

  ContractState scratch = state_;
  const ApplyContext ctx{b.height, b.timestamp_ms};
  for (const auto& tx : pending) {
    if (check_transaction(scratch, tx)) {
      if (excluded != nullptr) excluded->push_back(tx);
      continue;
    }
    apply_transaction(scratch, tx, ctx);
    b.transactions.push_back(tx);
  }
  b.transactions_hash = transactions_hash(b.transactions);
  b.signature = miner.sign(b.hash());
  return b;
}

ContractState Chain::replay() const {
  Chain fresh(genesis_);
  for (std::uint64_t h = 1; h <= height(); ++h) {
    if (fresh.validate_and_append(blocks_[h])) throw std::logic_error("replay: committed block rejected");
  }
  return fresh.state();
}

std::optional<std::uint64_t> validate_from_genesis(const GenesisConfig& genesis,
                                                   std::span<const Bytes> encoded_blocks) {
  Chain chain(genesis);
  for (std::size_t i = 0; i < encoded_blocks.size(); ++i) {
    const std::uint64_t height = i + 1;
    Block b;
    try {
      b = Block::decode(encoded_blocks[i]);
    } catch (const EncodingError&) {
      return height;
    }
    if (chain.validate_and_append(b)) return height;
  }
  return std::nullopt;
}

}  // namespace lisps::ledger
