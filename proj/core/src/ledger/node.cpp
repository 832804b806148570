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

#include "lisps/ledger/node.hpp"

#include <httplib.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>
#include <chrono>

#include "lisps/ledger/encoding.hpp"

namespace lisps::ledger {

namespace {

using nlohmann::json;

constexpr std::uint64_t kMaxNonceLead = 4096;

Bytes body_bytes(const std::string& body) { return Bytes(body.begin(), body.end()); }

std::string bytes_body(const Bytes& b) { return std::string(b.begin(), b.end()); }

void reply_json(httplib::Response& res, const json& j, int status = 200) {
  res.status = status;
  res.set_content(j.dump(), "application/json");
}

void reply_error(httplib::Response& res, int status, const std::string& message) {
  res.status = status;
  res.set_content(message + "\n", "text/plain");
}

json receipt_json(const Receipt& r) {
  return {{"tx_id", to_hex(r.tx_id)}, {"height", r.height}, {"ok", r.ok}, {"message", r.message}};
}

json identity_json(const Address& a, const Identity& id) {
  return {{"address", to_hex(a)},
          {"vid", id.vid},
          {"public_key", to_hex(id.public_key)},
          {"height", id.height}};
}

std::unique_ptr<httplib::Client> peer_client(const Endpoint& e) {
  auto c = std::make_unique<httplib::Client>(e.host, e.port);
  c->set_connection_timeout(std::chrono::milliseconds(200));
  c->set_read_timeout(std::chrono::seconds(2));
  c->set_write_timeout(std::chrono::seconds(2));
  return c;
}

}  // namespace

LedgerNode::LedgerNode(NodeOptions options)
    : options_(std::move(options)),
      clock_(options_.clock != nullptr ? options_.clock : &system_clock_),
      server_(std::make_unique<httplib::Server>()),
      chain_(options_.genesis) {
  if (options_.miner && !chain_.miner_index(options_.miner->public_key())) {
    throw std::invalid_argument("ledger node: key is not in the miner set");
  }
  {
    std::lock_guard lock(mu_);
    publish_locked();
  }
  install_routes();
}

LedgerNode::~LedgerNode() { stop(); }

void LedgerNode::mount(const std::function<void(httplib::Server&)>& routes) { routes(*server_); }

int LedgerNode::bind() {
  if (port_ > 0) return port_;
  if (options_.listen.port == 0) {
    port_ = server_->bind_to_any_port(options_.listen.host);
  } else if (server_->bind_to_port(options_.listen.host, options_.listen.port)) {
    port_ = options_.listen.port;
  } else {
    port_ = -1;
  }
  if (port_ < 0) {
    port_ = 0;
    throw std::runtime_error("ledger node: cannot bind " + options_.listen.to_string());
  }
  return port_;
}

void LedgerNode::add_peer(Endpoint peer) { options_.peers.push_back(std::move(peer)); }

void LedgerNode::start(bool produce) {
  bind();
  {
    std::lock_guard lock(run_mu_);
    running_ = true;
    started_ = true;
  }
  server_thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  relay_thread_ = std::thread([this] { relay_loop(); });
  if (produce) producer_thread_ = std::thread([this] { run(); });
}

void LedgerNode::stop() {
  {
    std::lock_guard lock(run_mu_);
    if (!running_ && !server_thread_.joinable()) {
      if (port_ <= 0 || started_) return;
      started_ = true;
      // Bound but never started: httplib only closes a running server.
      server_thread_ = std::thread([this] { server_->listen_after_bind(); });
      server_->wait_until_ready();
    }
    running_ = false;
  }
  run_cv_.notify_all();
  relay_cv_.notify_all();
  if (producer_thread_.joinable()) producer_thread_.join();
  if (relay_thread_.joinable()) relay_thread_.join();
  server_->stop();
  if (server_thread_.joinable()) server_thread_.join();
}

std::shared_ptr<const LedgerSnapshot> LedgerNode::snapshot() const {
  std::lock_guard lock(snapshot_mu_);
  return snapshot_;
}

std::optional<Block> LedgerNode::block(std::uint64_t height) const {
  std::lock_guard lock(mu_);
  if (height > chain_.height()) return std::nullopt;
  return chain_.block(height);
}

std::optional<Receipt> LedgerNode::receipt(const Hash32& tx_id) const {
  std::lock_guard lock(mu_);
  const Receipt* r = chain_.receipt(tx_id);
  if (r == nullptr) return std::nullopt;
  return *r;
}

std::size_t LedgerNode::mempool_size() const {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (const auto& [sender, txs] : mempool_) n += txs.size();
  return n;
}

SubmitResult LedgerNode::submit(const Transaction& tx, bool relay) {
  SubmitResult r;
  r.tx_id = tx.id();
  {
    std::lock_guard lock(mu_);
    const ContractState& state = chain_.state();
    const Identity* sender = state.identity(tx.sender);
    if (sender == nullptr) {
      r.error = "unregistered sender";
      return r;
    }
    if (!verify(sender->public_key, tx.signing_payload(), tx.signature)) {
      r.error = "bad signature";
      return r;
    }
    const std::uint64_t committed = state.nonce(tx.sender);
    if (tx.nonce <= committed) {
      r.error = "stale nonce";
      return r;
    }
    if (tx.nonce > committed + kMaxNonceLead) {
      r.error = "nonce too far ahead";
      return r;
    }
    auto& queue = mempool_[tx.sender];
    auto it = queue.find(tx.nonce);
    if (it != queue.end()) {
      if (it->second == tx) {
        r.accepted = true;
        return r;
      }
      r.error = "nonce already pending";
      return r;
    }
    queue.emplace(tx.nonce, tx);
  }
  r.accepted = true;
  if (relay) enqueue_relay("/tx", bytes_body(tx.encode()));
  return r;
}

std::optional<RejectReason> LedgerNode::import_block(const Block& b, bool relay) {
  {
    std::lock_guard lock(mu_);
    if (b.height <= chain_.height() && chain_.block(b.height) == b) return std::nullopt;
    if (auto bad = chain_.validate_and_append(b)) {
      spdlog::debug("ledger: rejected block {}: {}", b.height, to_string(*bad));
      return bad;
    }
    prune_mempool_locked();
    publish_locked();
  }
  if (relay) enqueue_relay("/block", bytes_body(b.encode()));
  return std::nullopt;
}

std::vector<Transaction> LedgerNode::pending_locked() const {
  std::vector<Transaction> out;
  const ContractState& state = chain_.state();
  for (const auto& [sender, txs] : mempool_) {
    std::uint64_t next = state.nonce(sender) + 1;
    for (auto it = txs.find(next); it != txs.end() && it->first == next; ++it, ++next) {
      if (out.size() == options_.max_block_transactions) return out;
      out.push_back(it->second);
    }
  }
  return out;
}

void LedgerNode::prune_mempool_locked() {
  const ContractState& state = chain_.state();
  for (auto it = mempool_.begin(); it != mempool_.end();) {
    auto& txs = it->second;
    txs.erase(txs.begin(), txs.upper_bound(state.nonce(it->first)));
    it = txs.empty() ? mempool_.erase(it) : std::next(it);
  }
}

void LedgerNode::publish_locked() {
  auto s = std::make_shared<LedgerSnapshot>();
  s->height = chain_.height();
  s->head_hash = chain_.head().hash();
  s->head_timestamp_ms = chain_.head().timestamp_ms;
  s->block_interval_ms = options_.genesis.block_interval_ms;
  s->state = chain_.state();
  std::lock_guard lock(snapshot_mu_);
  snapshot_ = std::move(s);
}

std::optional<Block> LedgerNode::tick() {
  if (!options_.miner) return std::nullopt;
  const std::int64_t now = clock_->now().ms;
  std::int64_t slot = 0;
  {
    std::lock_guard lock(mu_);
    slot = chain_.slot_of(now);
    if (slot < 1 || slot <= last_proposed_slot_) return std::nullopt;
    if (chain_.scheduled_miner(slot) != *chain_.miner_index(options_.miner->public_key())) {
      return std::nullopt;
    }
  }
  // Catch up before building on the head.
  if (!options_.peers.empty()) sync();

  Block b;
  {
    std::lock_guard lock(mu_);
    last_proposed_slot_ = slot;
    if (slot <= chain_.slot_of(chain_.head().timestamp_ms)) return std::nullopt;
    b = chain_.propose(*options_.miner, slot, pending_locked());
    if (auto bad = chain_.validate_and_append(b)) {
      spdlog::error("ledger: own block rejected: {}", to_string(*bad));
      return std::nullopt;
    }
    prune_mempool_locked();
    publish_locked();
  }
  spdlog::debug("ledger: proposed block {} in slot {} with {} txs", b.height, slot,
                b.transactions.size());
  enqueue_relay("/block", bytes_body(b.encode()));
  return b;
}

void LedgerNode::sync() {
  for (const auto& peer : options_.peers) {
    auto cli = peer_client(peer);
    auto head = cli->Get("/head");
    if (!head || head->status != 200) continue;
    std::uint64_t peer_height = 0;
    try {
      peer_height = json::parse(head->body).at("height").get<std::uint64_t>();
    } catch (const json::exception&) {
      continue;
    }
    std::uint64_t ours = snapshot()->height;
    while (ours < peer_height) {
      auto res = cli->Get("/block/" + std::to_string(ours + 1));
      if (!res || res->status != 200) break;
      try {
        if (import_block(Block::decode(body_bytes(res->body)), false)) break;
      } catch (const EncodingError&) {
        break;
      }
      ++ours;
    }
  }
}

void LedgerNode::run() {
  auto last_sync = std::chrono::steady_clock::now() - std::chrono::hours(1);
  const auto sync_period = std::chrono::milliseconds(options_.sync_period_ms);
  std::unique_lock lock(run_mu_);
  while (running_) {
    lock.unlock();
    if (!options_.peers.empty() && std::chrono::steady_clock::now() - last_sync >= sync_period) {
      sync();
      last_sync = std::chrono::steady_clock::now();
    }
    tick();
    const std::int64_t now = clock_->now().ms;
    const std::int64_t interval = options_.genesis.block_interval_ms;
    const std::int64_t until_slot =
        interval - ((now - options_.genesis.timestamp_ms) % interval + interval) % interval;
    const auto wait = std::chrono::milliseconds(std::clamp<std::int64_t>(until_slot, 1, 50));
    lock.lock();
    run_cv_.wait_for(lock, wait, [this] { return !running_; });
  }
}

void LedgerNode::enqueue_relay(std::string path, std::string body) {
  if (options_.peers.empty()) return;
  {
    std::lock_guard lock(relay_mu_);
    relay_queue_.emplace_back(std::move(path), std::move(body));
  }
  relay_cv_.notify_one();
}

void LedgerNode::relay_loop() {
  std::vector<std::unique_ptr<httplib::Client>> clients;
  for (const auto& p : options_.peers) clients.push_back(peer_client(p));
  std::unique_lock lock(relay_mu_);
  for (;;) {
    relay_cv_.wait(lock, [this] {
      std::lock_guard run(run_mu_);
      return !running_ || !relay_queue_.empty();
    });
    {
      std::lock_guard run(run_mu_);
      if (!running_) return;
    }
    auto [path, body] = std::move(relay_queue_.front());
    relay_queue_.pop_front();
    lock.unlock();
    for (auto& c : clients) {
      auto res = c->Post(path, body, "application/octet-stream");
      if (!res) spdlog::debug("ledger: relay {} failed", path);
    }
    lock.lock();
  }
}

void LedgerNode::install_routes() {
  auto& s = *server_;

  s.Post("/tx", [this](const httplib::Request& req, httplib::Response& res) {
    Transaction tx;
    try {
      tx = Transaction::decode(body_bytes(req.body));
    } catch (const EncodingError& e) {
      return reply_error(res, 400, std::string("malformed transaction: ") + e.what());
    }
    const SubmitResult r = submit(tx);
    if (!r.accepted) return reply_json(res, {{"error", r.error}, {"tx_id", to_hex(r.tx_id)}}, 400);
    reply_json(res, {{"tx_id", to_hex(r.tx_id)}});
  });

  s.Post("/block", [this](const httplib::Request& req, httplib::Response& res) {
    Block b;
    try {
      b = Block::decode(body_bytes(req.body));
    } catch (const EncodingError& e) {
      return reply_error(res, 400, std::string("malformed block: ") + e.what());
    }
    const std::uint64_t height = snapshot()->height;
    if (b.height > height + 1) {
      // Ahead of us; fetch the gap from peers on the next loop.
      run_cv_.notify_all();
      return reply_error(res, 409, "ahead of local head");
    }
    if (auto bad = import_block(b)) return reply_error(res, 409, std::string(to_string(*bad)));
    res.set_content("ok\n", "text/plain");
  });

  s.Get("/head", [this](const httplib::Request&, httplib::Response& res) {
    auto snap = snapshot();
    reply_json(res, {{"height", snap->height},
                     {"hash", to_hex(snap->head_hash)},
                     {"timestamp_ms", snap->head_timestamp_ms},
                     {"block_interval_ms", snap->block_interval_ms}});
  });

  s.Get(R"(/block/(\d+))", [this](const httplib::Request& req, httplib::Response& res) {
    std::uint64_t h = 0;
    const std::string& m = req.matches[1];
    if (std::from_chars(m.data(), m.data() + m.size(), h).ec != std::errc()) {
      return reply_error(res, 400, "bad height");
    }
    auto b = block(h);
    if (!b) return reply_error(res, 404, "no such block");
    res.set_content(bytes_body(b->encode()), "application/octet-stream");
  });

  s.Get(R"(/receipt/([0-9a-f]{64}))", [this](const httplib::Request& req, httplib::Response& res) {
    auto r = receipt(*fixed_from_hex<32>(req.matches[1].str()));
    if (!r) return reply_error(res, 404, "no receipt");
    reply_json(res, receipt_json(*r));
  });

  s.Get(R"(/state/registry/([0-9a-f]+))", [this](const httplib::Request& req, httplib::Response& res) {
    auto snap = snapshot();
    const std::string key = req.matches[1];
    const Identity* id = nullptr;
    Address addr{};
    if (auto a = fixed_from_hex<32>(key)) {
      addr = *a;
      id = snap->state.identity(addr);
    } else if (auto it = snap->state.vids.find(key); it != snap->state.vids.end()) {
      addr = it->second;
      id = snap->state.identity(addr);
    }
    if (id == nullptr) return reply_error(res, 404, "not registered");
    reply_json(res, identity_json(addr, *id));
  });

  s.Get(R"(/state/hia/(.+))", [this](const httplib::Request& req, httplib::Response& res) {
    auto snap = snapshot();
    auto it = snap->state.hia.find(req.matches[1]);
    if (it == snap->state.hia.end()) return reply_error(res, 404, "no entry");
    reply_json(res, {{"key", it->first},
                     {"hash", to_hex(it->second.hash)},
                     {"recorder", it->second.recorder},
                     {"height", it->second.height}});
  });

  s.Get(R"(/state/acl/([0-9a-f]+))", [this](const httplib::Request& req, httplib::Response& res) {
    auto snap = snapshot();
    const std::string vid = req.matches[1];
    json grants = json::array();
    for (auto it = snap->state.acl.lower_bound({vid, std::string()});
         it != snap->state.acl.end() && it->first.first == vid; ++it) {
      grants.push_back({{"resource", it->first.second},
                        {"actions", it->second.actions},
                        {"expiry_ms", it->second.expiry_ms},
                        {"height", it->second.height}});
    }
    reply_json(res, {{"vid", vid}, {"height", snap->height}, {"grants", grants}});
  });

  s.Get(R"(/state/nonce/([0-9a-f]{64}))", [this](const httplib::Request& req, httplib::Response& res) {
    auto snap = snapshot();
    reply_json(res, {{"nonce", snap->state.nonce(*fixed_from_hex<32>(req.matches[1].str()))}});
  });

  s.Get("/state/digest", [this](const httplib::Request&, httplib::Response& res) {
    auto snap = snapshot();
    reply_json(res, {{"height", snap->height},
                     {"digest", to_hex(snap->state.digest())},
                     {"canonical_digest", to_hex(snap->state.canonical_digest())}});
  });
}

}  // namespace lisps::ledger
