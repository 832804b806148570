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

#ifndef LISPS_LEDGER_BLOCK_HPP_
#define LISPS_LEDGER_BLOCK_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lisps/common/bytes.hpp"
#include "lisps/ledger/crypto.hpp"

namespace lisps::ledger {

struct Transaction {
  Address sender{};
  std::uint64_t nonce = 0;
  std::string contract;
  std::string method;
  Bytes args;
  Signature signature{};

  // sender, nonce, contract, method, args.
  Bytes signing_payload() const;
  // signing payload followed by the signature field.
  Bytes encode() const;
  static Transaction decode(ByteView in);

  Hash32 id() const;
  void sign(const KeyPair& key);

  friend bool operator==(const Transaction&, const Transaction&) = default;
};

// Builds and signs a transaction from `key`'s address.
Transaction make_transaction(const KeyPair& key, std::uint64_t nonce, std::string contract,
                             std::string method, Bytes args);

// SHA-256 of the 4-byte count followed by each length-prefixed encoding.
Hash32 transactions_hash(std::span<const Transaction> txs);

struct Block {
  std::uint64_t height = 0;
  Hash32 previous_hash{};
  std::int64_t timestamp_ms = 0;
  Hash32 transactions_hash{};
  Address proposer{};
  Signature signature{};
  std::vector<Transaction> transactions;

  // height, previous_hash, timestamp, transactions_hash, proposer.
  Bytes header_encoding() const;
  // SHA-256 of the header encoding; the signature is over this digest.
  Hash32 hash() const;

  // Header fields, signature, then the 4-byte transaction count and each
  // length-prefixed transaction.
  Bytes encode() const;
  static Block decode(ByteView in);

  friend bool operator==(const Block&, const Block&) = default;
};

// Height 0, zero previous hash, no transactions, zero proposer and
// signature.
Block genesis_block(std::int64_t timestamp_ms);

}  // namespace lisps::ledger

#endif  // LISPS_LEDGER_BLOCK_HPP_
