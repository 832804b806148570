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

#include "lisps/ledger/block.hpp"

#include "lisps/ledger/encoding.hpp"

namespace lisps::ledger {

namespace {

void put_payload(Encoder& e, const Transaction& tx) {
  e.fixed(tx.sender).u64(tx.nonce).str(tx.contract).str(tx.method).bytes(tx.args);
}

}  // namespace

Bytes Transaction::signing_payload() const {
  Encoder e;
  put_payload(e, *this);
  return e.take();
}

Bytes Transaction::encode() const {
  Encoder e;
  put_payload(e, *this);
  e.fixed(signature);
  return e.take();
}

Transaction Transaction::decode(ByteView in) {
  Decoder d(in);
  Transaction tx;
  tx.sender = d.fixed<32>();
  tx.nonce = d.u64();
  tx.contract = d.str();
  tx.method = d.str();
  ByteView args = d.bytes();
  tx.args.assign(args.begin(), args.end());
  tx.signature = d.fixed<64>();
  d.expect_done();
  return tx;
}

Hash32 Transaction::id() const { return sha256(ByteView(encode())); }

void Transaction::sign(const KeyPair& key) { signature = key.sign(signing_payload()); }

Transaction make_transaction(const KeyPair& key, std::uint64_t nonce, std::string contract,
                             std::string method, Bytes args) {
  Transaction tx;
  tx.sender = address_of(key.public_key());
  tx.nonce = nonce;
  tx.contract = std::move(contract);
  tx.method = std::move(method);
  tx.args = std::move(args);
  tx.sign(key);
  return tx;
}

Hash32 transactions_hash(std::span<const Transaction> txs) {
  Encoder e;
  e.u32(static_cast<std::uint32_t>(txs.size()));
  for (const auto& tx : txs) e.bytes(tx.encode());
  return sha256(ByteView(e.out()));
}

Bytes Block::header_encoding() const {
  Encoder e;
  e.u64(height).fixed(previous_hash).i64(timestamp_ms).fixed(transactions_hash).fixed(proposer);
  return e.take();
}

Hash32 Block::hash() const { return sha256(ByteView(header_encoding())); }

Bytes Block::encode() const {
  Encoder e;
  e.raw(header_encoding()).fixed(signature);
  e.u32(static_cast<std::uint32_t>(transactions.size()));
  for (const auto& tx : transactions) e.bytes(tx.encode());
  return e.take();
}

Block Block::decode(ByteView in) {
  Decoder d(in);
  Block b;
  b.height = d.u64();
  b.previous_hash = d.fixed<32>();
  b.timestamp_ms = d.i64();
  b.transactions_hash = d.fixed<32>();
  b.proposer = d.fixed<32>();
  b.signature = d.fixed<64>();
  const std::uint32_t n = d.u32();
  for (std::uint32_t i = 0; i < n; ++i) b.transactions.push_back(Transaction::decode(d.bytes()));
  d.expect_done();
  return b;
}

Block genesis_block(std::int64_t timestamp_ms) {
  Block b;
  b.timestamp_ms = timestamp_ms;
  b.transactions_hash = transactions_hash({});
  return b;
}

}  // namespace lisps::ledger
