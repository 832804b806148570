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

#include "lisps/ledger/crypto.hpp"

#include <openssl/evp.h>
#include <openssl/rand.h>
#include <openssl/sha.h>

#include <memory>
#include <stdexcept>

namespace lisps::ledger {

namespace {

struct PkeyDeleter {
  void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
struct MdCtxDeleter {
  void operator()(EVP_MD_CTX* p) const { EVP_MD_CTX_free(p); }
};
using PkeyPtr = std::unique_ptr<EVP_PKEY, PkeyDeleter>;
using MdCtxPtr = std::unique_ptr<EVP_MD_CTX, MdCtxDeleter>;

PkeyPtr private_key(const std::array<std::uint8_t, 32>& seed) {
  PkeyPtr k(EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr, seed.data(), seed.size()));
  if (!k) throw std::runtime_error("ed25519: cannot load private key");
  return k;
}

}  // namespace

Hash32 sha256(ByteView data) {
  Hash32 out;
  SHA256(data.data(), data.size(), out.data());
  return out;
}

KeyPair::KeyPair(const std::array<std::uint8_t, 32>& seed) : seed_(seed) {
  auto k = private_key(seed_);
  std::size_t len = public_.size();
  if (EVP_PKEY_get_raw_public_key(k.get(), public_.data(), &len) != 1 || len != public_.size()) {
    throw std::runtime_error("ed25519: cannot derive public key");
  }
}

KeyPair KeyPair::from_name(std::string_view name) {
  return KeyPair(sha256("lisps-seed:" + std::string(name)));
}

KeyPair KeyPair::generate() {
  std::array<std::uint8_t, 32> seed;
  if (RAND_bytes(seed.data(), static_cast<int>(seed.size())) != 1) {
    throw std::runtime_error("RAND_bytes failed");
  }
  return KeyPair(seed);
}

Signature KeyPair::sign(ByteView message) const {
  auto k = private_key(seed_);
  MdCtxPtr ctx(EVP_MD_CTX_new());
  Signature sig;
  std::size_t len = sig.size();
  if (!ctx || EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, k.get()) != 1 ||
      EVP_DigestSign(ctx.get(), sig.data(), &len, message.data(), message.size()) != 1 ||
      len != sig.size()) {
    throw std::runtime_error("ed25519: signing failed");
  }
  return sig;
}

bool verify(const PublicKey& key, ByteView message, const Signature& sig) {
  PkeyPtr k(EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr, key.data(), key.size()));
  if (!k) return false;
  MdCtxPtr ctx(EVP_MD_CTX_new());
  if (!ctx || EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, k.get()) != 1) return false;
  return EVP_DigestVerify(ctx.get(), sig.data(), sig.size(), message.data(), message.size()) == 1;
}

Address address_of(const PublicKey& key) { return sha256(ByteView(key)); }

std::string vid_of(const Address& address) { return to_hex(sha256(ByteView(address))).substr(0, 16); }

}  // namespace lisps::ledger
