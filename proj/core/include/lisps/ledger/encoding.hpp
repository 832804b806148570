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

// Canonical binary encoding: every field is a 4-byte big-endian length
// followed by its bytes. Integers are 8-byte big-endian fields.

#ifndef LISPS_LEDGER_ENCODING_HPP_
#define LISPS_LEDGER_ENCODING_HPP_

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "lisps/common/bytes.hpp"

namespace lisps::ledger {

class EncodingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Encoder {
 public:
  Encoder& u32(std::uint32_t v);  // raw, not length-prefixed
  Encoder& u64(std::uint64_t v);
  Encoder& i64(std::int64_t v) { return u64(static_cast<std::uint64_t>(v)); }
  Encoder& bytes(ByteView b);
  Encoder& str(std::string_view s) { return bytes(as_bytes(s)); }
  template <std::size_t N>
  Encoder& fixed(const std::array<std::uint8_t, N>& a) {
    return bytes(ByteView(a));
  }
  Encoder& raw(ByteView b);

  const Bytes& out() const { return out_; }
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

// Throws EncodingError on truncated or malformed input.
class Decoder {
 public:
  explicit Decoder(ByteView in) : in_(in) {}

  std::uint32_t u32();
  std::uint64_t u64();
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  ByteView bytes();
  std::string str();
  template <std::size_t N>
  std::array<std::uint8_t, N> fixed() {
    ByteView b = bytes();
    if (b.size() != N) throw EncodingError("fixed field has wrong length");
    std::array<std::uint8_t, N> a;
    std::copy(b.begin(), b.end(), a.begin());
    return a;
  }

  std::size_t offset() const { return pos_; }
  bool done() const { return pos_ == in_.size(); }
  void expect_done() const;

 private:
  ByteView take(std::size_t n);
  ByteView in_;
  std::size_t pos_ = 0;
};

}  // namespace lisps::ledger

#endif  // LISPS_LEDGER_ENCODING_HPP_
