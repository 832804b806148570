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

#include "lisps/security/ledger_view.hpp"

#include <httplib.h>
#include <json.hpp>

namespace lisps::security {

using nlohmann::json;

std::uint64_t LocalLedgerView::height() { return node_.snapshot()->height; }

std::int64_t LocalLedgerView::block_interval_ms() { return node_.genesis().block_interval_ms; }

std::optional<ledger::Identity> LocalLedgerView::identity(std::string_view vid) {
  auto snap = node_.snapshot();
  const ledger::Identity* id = snap->state.identity(vid);
  if (id == nullptr) return std::nullopt;
  return *id;
}

std::optional<ledger::HiaEntry> LocalLedgerView::hia(std::string_view key) {
  auto snap = node_.snapshot();
  auto it = snap->state.hia.find(std::string(key));
  if (it == snap->state.hia.end()) return std::nullopt;
  return it->second;
}

GrantList LocalLedgerView::grants(std::string_view vid) {
  auto snap = node_.snapshot();
  GrantList out;
  const std::string v(vid);
  for (auto it = snap->state.acl.lower_bound({v, std::string()});
       it != snap->state.acl.end() && it->first.first == v; ++it) {
    out.emplace_back(it->first.second, it->second);
  }
  return out;
}

std::uint64_t LocalLedgerView::nonce(const ledger::Address& address) {
  return node_.snapshot()->state.nonce(address);
}

ledger::SubmitResult LocalLedgerView::submit(const ledger::Transaction& tx) {
  return node_.submit(tx);
}

std::optional<ledger::Receipt> LocalLedgerView::receipt(const ledger::Hash32& tx_id) {
  return node_.receipt(tx_id);
}

HttpLedgerView::HttpLedgerView(Endpoint node, std::chrono::milliseconds timeout)
    : node_(std::move(node)), timeout_(timeout) {}

HttpLedgerView::~HttpLedgerView() = default;

HttpLedgerView::Response HttpLedgerView::get(const std::string& path) {
  httplib::Client cli(node_.host, node_.port);
  cli.set_connection_timeout(timeout_);
  cli.set_read_timeout(timeout_);
  auto res = cli.Get(path);
  if (!res) {
    throw LedgerUnavailable("ledger " + node_.to_string() + ": " + httplib::to_string(res.error()));
  }
  if (res->status != 200 && res->status != 404) {
    throw LedgerUnavailable("ledger " + node_.to_string() + ": HTTP " +
                            std::to_string(res->status) + " for " + path);
  }
  return {res->status, res->body};
}

namespace {

json parse_or_throw(const std::string& body) {
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    throw LedgerUnavailable(std::string("ledger: malformed response: ") + e.what());
  }
}

template <std::size_t N>
std::array<std::uint8_t, N> hex_field(const json& j, const char* name) {
  auto v = fixed_from_hex<N>(j.at(name).get<std::string>());
  if (!v) throw LedgerUnavailable(std::string("ledger: malformed field ") + name);
  return *v;
}

template <typename F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw LedgerUnavailable(std::string("ledger: malformed response: ") + e.what());
  }
}

}  // namespace

std::uint64_t HttpLedgerView::height() {
  auto j = parse_or_throw(get("/head").body);
  return guarded([&] { return j.at("height").get<std::uint64_t>(); });
}

std::int64_t HttpLedgerView::block_interval_ms() {
  auto j = parse_or_throw(get("/head").body);
  return guarded([&] { return j.at("block_interval_ms").get<std::int64_t>(); });
}

std::optional<ledger::Identity> HttpLedgerView::identity(std::string_view vid) {
  // Only hex reaches the route; anything else cannot be a vid.
  if (vid.empty() || vid.find_first_not_of("0123456789abcdef") != std::string_view::npos) {
    return std::nullopt;
  }
  auto r = get("/state/registry/" + std::string(vid));
  if (r.status == 404) return std::nullopt;
  auto j = parse_or_throw(r.body);
  return guarded([&] {
    ledger::Identity id{j.at("vid").get<std::string>(), hex_field<32>(j, "public_key"),
                        j.at("height").get<std::uint64_t>()};
    if (id.vid != vid) throw LedgerUnavailable("ledger: registry answered for another vid");
    return std::optional<ledger::Identity>(id);
  });
}

std::optional<ledger::HiaEntry> HttpLedgerView::hia(std::string_view key) {
  auto r = get("/state/hia/" + std::string(key));
  if (r.status == 404) return std::nullopt;
  auto j = parse_or_throw(r.body);
  return guarded([&] {
    return std::optional<ledger::HiaEntry>(ledger::HiaEntry{
        hex_field<32>(j, "hash"), j.at("recorder").get<std::string>(),
        j.at("height").get<std::uint64_t>()});
  });
}

GrantList HttpLedgerView::grants(std::string_view vid) {
  if (vid.empty() || vid.find_first_not_of("0123456789abcdef") != std::string_view::npos) {
    return {};
  }
  auto r = get("/state/acl/" + std::string(vid));
  if (r.status == 404) return {};
  auto j = parse_or_throw(r.body);
  return guarded([&] {
    GrantList out;
    for (const auto& g : j.at("grants")) {
      out.emplace_back(g.at("resource").get<std::string>(),
                       ledger::Grant{g.at("actions").get<std::uint64_t>(),
                                     g.at("expiry_ms").get<std::int64_t>(),
                                     g.at("height").get<std::uint64_t>()});
    }
    return out;
  });
}

std::uint64_t HttpLedgerView::nonce(const ledger::Address& address) {
  auto j = parse_or_throw(get("/state/nonce/" + to_hex(address)).body);
  return guarded([&] { return j.at("nonce").get<std::uint64_t>(); });
}

ledger::SubmitResult HttpLedgerView::submit(const ledger::Transaction& tx) {
  httplib::Client cli(node_.host, node_.port);
  cli.set_connection_timeout(timeout_);
  cli.set_read_timeout(timeout_);
  const Bytes body = tx.encode();
  auto res = cli.Post("/tx", std::string(body.begin(), body.end()), "application/octet-stream");
  if (!res) {
    throw LedgerUnavailable("ledger " + node_.to_string() + ": " + httplib::to_string(res.error()));
  }
  ledger::SubmitResult out;
  out.tx_id = tx.id();
  if (res->status == 200) {
    out.accepted = true;
    return out;
  }
  try {
    out.error = json::parse(res->body).at("error").get<std::string>();
  } catch (const json::exception&) {
    out.error = res->body;
  }
  return out;
}

std::optional<ledger::Receipt> HttpLedgerView::receipt(const ledger::Hash32& tx_id) {
  auto r = get("/receipt/" + to_hex(tx_id));
  if (r.status == 404) return std::nullopt;
  auto j = parse_or_throw(r.body);
  return guarded([&] {
    return std::optional<ledger::Receipt>(
        ledger::Receipt{hex_field<32>(j, "tx_id"), j.at("height").get<std::uint64_t>(),
                        j.at("ok").get<bool>(), j.at("message").get<std::string>()});
  });
}

}  // namespace lisps::security
