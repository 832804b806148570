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

// A ledger node: chain, mempool, slot-driven block production, and the
// HTTP interface used by peers and clients.
//
//   POST /tx                   canonical transaction bytes
//   POST /block                canonical block bytes (peer relay)
//   GET  /head                 {"height", "hash", "timestamp_ms", "block_interval_ms"}
//   GET  /block/<height>       canonical block bytes
//   GET  /receipt/<txid>       {"tx_id", "height", "ok", "message"}
//   GET  /state/registry/<address-or-vid>
//   GET  /state/hia/<key>
//   GET  /state/acl/<vid>
//   GET  /state/nonce/<address>
//   GET  /state/digest
//
// All state transitions (transaction admission, proposal, block import)
// run under one lock. Readers take an immutable snapshot.

#ifndef LISPS_LEDGER_NODE_HPP_
#define LISPS_LEDGER_NODE_HPP_

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "lisps/common/net.hpp"
#include "lisps/common/time.hpp"
#include "lisps/ledger/chain.hpp"

namespace httplib {
class Server;
}

namespace lisps::ledger {

struct NodeOptions {
  GenesisConfig genesis;
  std::optional<KeyPair> miner;  // unset for an observer node
  Endpoint listen{"127.0.0.1", 0};
  std::vector<Endpoint> peers;
  const Clock* clock = nullptr;  // defaults to the system clock
  std::int64_t sync_period_ms = 250;
  std::size_t max_block_transactions = 2000;
};

struct LedgerSnapshot {
  std::uint64_t height = 0;
  Hash32 head_hash{};
  std::int64_t head_timestamp_ms = 0;
  std::int64_t block_interval_ms = 0;
  ContractState state;
};

struct SubmitResult {
  bool accepted = false;
  Hash32 tx_id{};
  std::string error;
};

class LedgerNode {
 public:
  explicit LedgerNode(NodeOptions options);
  ~LedgerNode();
  LedgerNode(const LedgerNode&) = delete;
  LedgerNode& operator=(const LedgerNode&) = delete;

  // Binds the listening socket and returns the port. Idempotent.
  int bind();
  // Adds a peer. Call before start().
  void add_peer(Endpoint peer);
  // Binds if needed and serves HTTP. With `produce` the node also runs its
  // block production and peer sync loop; otherwise callers drive tick().
  void start(bool produce = true);
  void stop();
  int port() const { return port_; }
  Endpoint endpoint() const { return {options_.listen.host, port_}; }

  // Adds routes to the node's HTTP server. Call before start().
  void mount(const std::function<void(httplib::Server&)>& routes);

  std::shared_ptr<const LedgerSnapshot> snapshot() const;
  const GenesisConfig& genesis() const { return options_.genesis; }
  std::optional<Block> block(std::uint64_t height) const;
  std::optional<Receipt> receipt(const Hash32& tx_id) const;
  std::size_t mempool_size() const;

  // Admits a transaction to the mempool and relays it to peers.
  SubmitResult submit(const Transaction& tx, bool relay = true);
  // Imports a block produced elsewhere.
  std::optional<RejectReason> import_block(const Block& block, bool relay = true);

  // Proposes a block if the current slot belongs to this node and has not
  // been filled. Returns the new block, if any.
  std::optional<Block> tick();
  // Pulls missing blocks from peers.
  void sync();

 private:
  void install_routes();
  void run();
  void relay_loop();
  void enqueue_relay(std::string path, std::string body);
  void publish_locked();
  void prune_mempool_locked();
  std::vector<Transaction> pending_locked() const;

  NodeOptions options_;
  SystemClock system_clock_;
  const Clock* clock_;
  std::unique_ptr<httplib::Server> server_;
  int port_ = 0;

  mutable std::mutex mu_;
  Chain chain_;
  std::map<Address, std::map<std::uint64_t, Transaction>> mempool_;
  std::int64_t last_proposed_slot_ = 0;

  mutable std::mutex snapshot_mu_;
  std::shared_ptr<const LedgerSnapshot> snapshot_;

  std::mutex relay_mu_;
  std::condition_variable relay_cv_;
  std::deque<std::pair<std::string, std::string>> relay_queue_;

  std::mutex run_mu_;
  std::condition_variable run_cv_;
  bool running_ = false;
  bool started_ = false;
  std::thread server_thread_;
  std::thread producer_thread_;
  std::thread relay_thread_;
};

}  // namespace lisps::ledger

#endif  // LISPS_LEDGER_NODE_HPP_
