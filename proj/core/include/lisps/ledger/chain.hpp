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

// Hash-chained blocks under slot-based round-robin proof of authority.
//
// Time after genesis is cut into slots of one block interval. Slot s
// (s >= 1) starts at genesis + s * interval and belongs to miner
// (s - 1) mod n. A block carries the start time of its slot, so a silent
// miner only leaves its own slots empty. With every miner live, heights
// 1, 2, 3, ... fall in slots 1, 2, 3, ... and rotate through the miner list.

#ifndef LISPS_LEDGER_CHAIN_HPP_
#define LISPS_LEDGER_CHAIN_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lisps/ledger/block.hpp"
#include "lisps/ledger/contracts.hpp"

namespace lisps::ledger {

struct MinerInfo {
  std::string name;
  PublicKey public_key{};
};

struct GenesisGrant {
  std::string vid;
  std::string resource;
  std::uint64_t actions = 0;
  std::int64_t expiry_ms = kNeverExpires;
};

struct GenesisConfig {
  std::vector<MinerInfo> miners;
  std::int64_t block_interval_ms = 2000;
  std::int64_t timestamp_ms = 0;
  std::vector<PublicKey> identities;
  std::vector<GenesisGrant> grants;

  // Throws std::invalid_argument on an empty miner set or bad interval.
  void validate() const;
  std::string to_json() const;
  static GenesisConfig from_json(std::string_view text);
  ContractState initial_state() const;
};

enum class RejectReason {
  kMalformed,
  kBadHeight,
  kBrokenLinkage,
  kBadSlot,
  kOutOfTurn,
  kBadBlockSignature,
  kBadTransactionsHash,
  kBadTransactionSignature,
  kBadNonce,
};

std::string_view to_string(RejectReason r);

class Chain {
 public:
  explicit Chain(GenesisConfig genesis);

  const GenesisConfig& genesis() const { return genesis_; }
  std::uint64_t height() const { return blocks_.size() - 1; }
  const Block& head() const { return blocks_.back(); }
  const Block& block(std::uint64_t height) const { return blocks_.at(height); }
  const ContractState& state() const { return state_; }
  const Receipt* receipt(const Hash32& tx_id) const;

  std::int64_t slot_of(std::int64_t timestamp_ms) const;
  std::int64_t slot_start(std::int64_t slot) const;
  std::size_t scheduled_miner(std::int64_t slot) const;
  // Index of `key` in the miner set, if any.
  std::optional<std::size_t> miner_index(const PublicKey& key) const;

  // Returns the rejection reason, or nullopt after appending and applying
  // the block. The chain is unchanged on rejection.
  std::optional<RejectReason> validate_and_append(const Block& block);
  std::optional<RejectReason> validate(const Block& block) const;

  // Builds and signs the next block in `slot` from `pending` in order.
  // Transactions that are not valid at their position are left out and
  // reported through `excluded`. Throws std::logic_error if `miner` does
  // not own the slot or the slot is not after the head's.
  Block propose(const KeyPair& miner, std::int64_t slot, std::span<const Transaction> pending,
                std::vector<Transaction>* excluded = nullptr) const;

  // Re-applies every block from genesis and returns the resulting state.
  ContractState replay() const;

 private:
  struct Applied {
    ContractState state;
    std::vector<Receipt> receipts;
  };
  std::optional<RejectReason> evaluate(const Block& block, Applied* out) const;

  GenesisConfig genesis_;
  std::vector<Block> blocks_;
  ContractState state_;
  std::map<Hash32, Receipt> receipts_;
};

// Checks a signed transaction against `state`: registered sender, valid
// signature, next nonce.
std::optional<RejectReason> check_transaction(const ContractState& state, const Transaction& tx);

// Decodes and appends each encoded block in turn. Returns the height of the
// first block that fails, or nullopt if the whole chain is valid.
std::optional<std::uint64_t> validate_from_genesis(const GenesisConfig& genesis,
                                                   std::span<const Bytes> encoded_blocks);

}  // namespace lisps::ledger

#endif  // LISPS_LEDGER_CHAIN_HPP_
