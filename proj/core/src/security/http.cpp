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

#include "lisps/security/http.hpp"

#include <httplib.h>
#include <json.hpp>

#include <charconv>

#include "lisps/ledger/contracts.hpp"
#include "lisps/ledger/encoding.hpp"

namespace lisps::security {

namespace {

using nlohmann::json;

void reply(httplib::Response& res, const json& j, int status = 200) {
  res.status = status;
  res.set_content(j.dump(), "application/json");
}

json receipt_json(const ledger::Receipt& r) {
  return {{"tx_id", to_hex(r.tx_id)}, {"height", r.height}, {"ok", r.ok}, {"message", r.message}};
}

ledger::Receipt receipt_from_json(const json& j) {
  ledger::Receipt r;
  if (auto id = fixed_from_hex<32>(j.value("tx_id", std::string()))) r.tx_id = *id;
  r.height = j.value("height", std::uint64_t{0});
  r.ok = j.value("ok", false);
  r.message = j.value("message", std::string());
  return r;
}

// Runs `f` with the parsed JSON body; malformed input is a 400.
template <typename F>
void with_body(const httplib::Request& req, httplib::Response& res, F&& f) {
  try {
    f(json::parse(req.body));
  } catch (const json::exception& e) {
    reply(res, {{"error", std::string("bad request: ") + e.what()}}, 400);
  } catch (const ledger::EncodingError& e) {
    reply(res, {{"error", std::string("bad transaction: ") + e.what()}}, 400);
  } catch (const LedgerUnavailable& e) {
    reply(res, {{"error", e.what()}}, 503);
  }
}

ledger::Transaction tx_field(const json& j) {
  auto raw = from_hex(j.at("tx").get<std::string>());
  if (!raw) throw ledger::EncodingError("tx is not hex");
  return ledger::Transaction::decode(*raw);
}

}  // namespace

std::optional<std::uint64_t> parse_actions(std::string_view text) {
  if (text == "read") return ledger::kRead;
  if (text == "manage") return ledger::kManage;
  if (text == "read,manage" || text == "manage,read") return ledger::kRead | ledger::kManage;
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || v == 0 ||
      (v & ~std::uint64_t{ledger::kRead | ledger::kManage}) != 0) {
    return std::nullopt;
  }
  return v;
}

void mount_security_routes(httplib::Server& server, SecurityServices& services,
                           std::optional<ledger::KeyPair> registrar) {
  server.Post("/register", [&services, registrar](const httplib::Request& req,
                                                  httplib::Response& res) {
    with_body(req, res, [&](const json& j) {
      auto key = fixed_from_hex<32>(j.at("public_key").get<std::string>());
      if (!key) return reply(res, {{"error", "public_key must be 32 bytes of hex"}}, 400);
      if (!registrar) return reply(res, {{"error", "no registrar configured"}}, 503);
      const ledger::Address address = ledger::address_of(*key);
      const RegistrationResult r = services.register_entity(*registrar, address, *key);
      json out = receipt_json(r.receipt);
      out["address"] = to_hex(address);
      out["vid"] = r.vid;
      reply(res, out, r.receipt.ok ? 200 : 409);
    });
  });

  server.Post("/authenticate", [&services](const httplib::Request& req, httplib::Response& res) {
    with_body(req, res, [&](const json& j) {
      auto sig = fixed_from_hex<64>(j.at("signature").get<std::string>());
      if (!sig) return reply(res, {{"verdict", "bad signature"}});
      const AuthVerdict v = services.authenticate(j.at("vid").get<std::string>(),
                                                  j.at("nonce").get<std::string>(), *sig);
      reply(res, {{"verdict", std::string(to_string(v))}});
    });
  });

  server.Post("/hia/record", [&services](const httplib::Request& req, httplib::Response& res) {
    with_body(req, res, [&](const json& j) {
      const ledger::Transaction tx = tx_field(j);
      if (tx.contract != "hia" || tx.method != "record") {
        return reply(res, {{"error", "not an hia.record transaction"}}, 400);
      }
      const ledger::Receipt r = services.submit_and_wait(tx);
      reply(res, receipt_json(r), r.ok ? 200 : 409);
    });
  });

  server.Post("/hia/verify", [&services](const httplib::Request& req, httplib::Response& res) {
    with_body(req, res, [&](const json& j) {
      auto frame = from_hex(j.at("frame").get<std::string>());
      if (!frame) return reply(res, {{"error", "frame must be hex"}}, 400);
      const HiaStatus s = services.verify_hashed_index(j.at("key").get<std::string>(), *frame);
      reply(res, {{"result", std::string(to_string(s))}});
    });
  });

  server.Post("/acl/grant", [&services](const httplib::Request& req, httplib::Response& res) {
    with_body(req, res, [&](const json& j) {
      const ledger::Transaction tx = tx_field(j);
      if (tx.contract != "acl" || tx.method != "grant") {
        return reply(res, {{"error", "not an acl.grant transaction"}}, 400);
      }
      const ledger::Receipt r = services.submit_and_wait(tx);
      reply(res, receipt_json(r), r.ok ? 200 : 409);
    });
  });

  server.Get("/acl/check", [&services](const httplib::Request& req, httplib::Response& res) {
    auto deny = [&](const std::string& reason) {
      reply(res, {{"decision", "deny"}, {"reason", reason}}, 403);
    };
    const auto token = AccessToken::parse(req.get_header_value(kTokenHeader));
    if (!token) return deny("missing or malformed token");
    if (token->vid != req.get_param_value("vid")) return deny("token does not match vid");
    const auto actions = parse_actions(req.get_param_value("act"));
    if (!actions) return deny("bad actions");
    const AccessDecision d = services.check_access(*token, req.get_param_value("res"), *actions);
    if (!d.allowed) return deny(d.reason);
    reply(res, {{"decision", "allow"}, {"expiry_ms", d.expiry_ms}});
  });
}

SecurityClient::SecurityClient(Endpoint endpoint, std::chrono::milliseconds timeout)
    : endpoint_(std::move(endpoint)), timeout_(timeout) {}

namespace {

struct Reply {
  int status = 0;
  json body;
};

Reply call(const Endpoint& ep, std::chrono::milliseconds timeout, const std::string& method,
           const std::string& path, const json& body, const httplib::Headers& headers = {}) {
  httplib::Client cli(ep.host, ep.port);
  cli.set_connection_timeout(std::chrono::milliseconds(1000));
  cli.set_read_timeout(timeout);
  auto res = method == "GET" ? cli.Get(path, headers)
                             : cli.Post(path, headers, body.dump(), "application/json");
  if (!res) {
    throw LedgerUnavailable("security service " + ep.to_string() + ": " +
                            httplib::to_string(res.error()));
  }
  Reply r{res->status, {}};
  try {
    r.body = json::parse(res->body);
  } catch (const json::exception&) {
    throw LedgerUnavailable("security service: malformed response");
  }
  if (r.status == 503 || r.status == 400) {
    throw LedgerUnavailable("security service: " + r.body.value("error", std::string("error")));
  }
  return r;
}

}  // namespace

RegistrationResult SecurityClient::register_key(const ledger::PublicKey& key) {
  auto r = call(endpoint_, timeout_, "POST", "/register", {{"public_key", to_hex(key)}});
  return {receipt_from_json(r.body), r.body.value("vid", std::string())};
}

AuthVerdict SecurityClient::authenticate(const AccessToken& token) {
  auto r = call(endpoint_, timeout_, "POST", "/authenticate",
                {{"vid", token.vid}, {"nonce", token.nonce}, {"signature", to_hex(token.signature)}});
  const std::string v = r.body.value("verdict", std::string());
  if (v == "accept") return AuthVerdict::kAccept;
  if (v == "unregistered") return AuthVerdict::kUnregistered;
  return AuthVerdict::kBadSignature;
}

ledger::Receipt SecurityClient::record(const ledger::Transaction& tx) {
  return receipt_from_json(
      call(endpoint_, timeout_, "POST", "/hia/record", {{"tx", to_hex(tx.encode())}}).body);
}

HiaStatus SecurityClient::verify(std::string_view key, ByteView frame) {
  auto r = call(endpoint_, timeout_, "POST", "/hia/verify",
                {{"key", std::string(key)}, {"frame", to_hex(frame)}});
  const std::string v = r.body.value("result", std::string());
  if (v == "authentic") return HiaStatus::kAuthentic;
  if (v == "tampered") return HiaStatus::kTampered;
  return HiaStatus::kUnknown;
}

ledger::Receipt SecurityClient::grant(const ledger::Transaction& tx) {
  return receipt_from_json(
      call(endpoint_, timeout_, "POST", "/acl/grant", {{"tx", to_hex(tx.encode())}}).body);
}

AccessDecision SecurityClient::check(const AccessToken& token, std::string_view resource,
                                     std::string_view actions) {
  httplib::Params params{{"vid", token.vid}, {"res", std::string(resource)},
                         {"act", std::string(actions)}};
  const std::string path = httplib::append_query_params("/acl/check", params);
  try {
    auto r = call(endpoint_, timeout_, "GET", path, {}, {{kTokenHeader, token.format()}});
    if (r.status == 200) return AccessDecision::allow(r.body.value("expiry_ms", std::int64_t{0}));
    return AccessDecision::deny(r.body.value("reason", std::string("denied")));
  } catch (const LedgerUnavailable&) {
    return AccessDecision::deny("ledger unavailable");
  }
}

}  // namespace lisps::security
