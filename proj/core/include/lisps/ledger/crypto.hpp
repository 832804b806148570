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

// SHA-256 and Ed25519.

#ifndef LISPS_LEDGER_CRYPTO_HPP_
#define LISPS_LEDGER_CRYPTO_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "lisps/common/bytes.hpp"

namespace lisps::ledger {

using Hash32 = std::array<std::uint8_t, 32>;
using PublicKey = std::array<std::uint8_t, 32>;
using Signature = std::array<std::uint8_t, 64>;
using Address = Hash32;

Hash32 sha256(ByteView data);
inline Hash32 sha256(std::string_view data) { return sha256(as_bytes(data)); }

// Ed25519 key pair held as its 32-byte seed.
class KeyPair {
 public:
  explicit KeyPair(const std::array<std::uint8_t, 32>& seed);

  // Seed = SHA-256("lisps-seed:" + name). For test and harness identities.
  static KeyPair from_name(std::string_view name);
  static KeyPair generate();

  const PublicKey& public_key() const { return public_; }
  const std::array<std::uint8_t, 32>& seed() const { return seed_; }
  Signature sign(ByteView message) const;

 private:
  std::array<std::uint8_t, 32> seed_;
  PublicKey public_;
};

bool verify(const PublicKey& key, ByteView message, const Signature& sig);

// Account address of a public key: SHA-256(key).
Address address_of(const PublicKey& key);

// First 16 hex characters of SHA-256(address).
std::string vid_of(const Address& address);

}  // namespace lisps::ledger

#endif  // LISPS_LEDGER_CRYPTO_HPP_
