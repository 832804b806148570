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

// Access to committed ledger state from security services, either in the
// same process as a node or over the node's HTTP interface. Every call
// throws LedgerUnavailable when the ledger cannot be reached.

#ifndef LISPS_SECURITY_LEDGER_VIEW_HPP_
#define LISPS_SECURITY_LEDGER_VIEW_HPP_

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lisps/common/net.hpp"
#include "lisps/ledger/node.hpp"

namespace lisps::security {

class LedgerUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using GrantList = std::vector<std::pair<std::string, ledger::Grant>>;  // (resource, grant)

class LedgerView {
 public:
  virtual ~LedgerView() = default;

  virtual std::uint64_t height() = 0;
  virtual std::int64_t block_interval_ms() = 0;
  virtual std::optional<ledger::Identity> identity(std::string_view vid) = 0;
  virtual std::optional<ledger::HiaEntry> hia(std::string_view key) = 0;
  virtual GrantList grants(std::string_view vid) = 0;
  virtual std::uint64_t nonce(const ledger::Address& address) = 0;
  virtual ledger::SubmitResult submit(const ledger::Transaction& tx) = 0;
  virtual std::optional<ledger::Receipt> receipt(const ledger::Hash32& tx_id) = 0;
};

class LocalLedgerView final : public LedgerView {
 public:
  explicit LocalLedgerView(ledger::LedgerNode& node) : node_(node) {}

  std::uint64_t height() override;
  std::int64_t block_interval_ms() override;
  std::optional<ledger::Identity> identity(std::string_view vid) override;
  std::optional<ledger::HiaEntry> hia(std::string_view key) override;
  GrantList grants(std::string_view vid) override;
  std::uint64_t nonce(const ledger::Address& address) override;
  ledger::SubmitResult submit(const ledger::Transaction& tx) override;
  std::optional<ledger::Receipt> receipt(const ledger::Hash32& tx_id) override;

 private:
  ledger::LedgerNode& node_;
};

class HttpLedgerView final : public LedgerView {
 public:
  explicit HttpLedgerView(Endpoint node,
                          std::chrono::milliseconds timeout = std::chrono::milliseconds(1000));
  ~HttpLedgerView() override;

  std::uint64_t height() override;
  std::int64_t block_interval_ms() override;
  std::optional<ledger::Identity> identity(std::string_view vid) override;
  std::optional<ledger::HiaEntry> hia(std::string_view key) override;
  GrantList grants(std::string_view vid) override;
  std::uint64_t nonce(const ledger::Address& address) override;
  ledger::SubmitResult submit(const ledger::Transaction& tx) override;
  std::optional<ledger::Receipt> receipt(const ledger::Hash32& tx_id) override;

 private:
  struct Response {
    int status = 0;
    std::string body;
  };
  Response get(const std::string& path);

  Endpoint node_;
  std::chrono::milliseconds timeout_;
};

}  // namespace lisps::security

#endif  // LISPS_SECURITY_LEDGER_VIEW_HPP_
