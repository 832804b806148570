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

#include "lisps/ledger/encoding.hpp"

namespace lisps::ledger {

Encoder& Encoder::u32(std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) out_.push_back(static_cast<std::uint8_t>(v >> s));
  return *this;
}

Encoder& Encoder::u64(std::uint64_t v) {
  u32(8);
  for (int s = 56; s >= 0; s -= 8) out_.push_back(static_cast<std::uint8_t>(v >> s));
  return *this;
}

Encoder& Encoder::bytes(ByteView b) {
  if (b.size() > UINT32_MAX) throw EncodingError("field too long");
  u32(static_cast<std::uint32_t>(b.size()));
  return raw(b);
}

Encoder& Encoder::raw(ByteView b) {
  out_.insert(out_.end(), b.begin(), b.end());
  return *this;
}

ByteView Decoder::take(std::size_t n) {
  if (n > in_.size() - pos_) throw EncodingError("truncated input");
  ByteView b = in_.subspan(pos_, n);
  pos_ += n;
  return b;
}

std::uint32_t Decoder::u32() {
  ByteView b = take(4);
  return static_cast<std::uint32_t>(b[0]) << 24 | static_cast<std::uint32_t>(b[1]) << 16 |
         static_cast<std::uint32_t>(b[2]) << 8 | b[3];
}

std::uint64_t Decoder::u64() {
  if (u32() != 8) throw EncodingError("integer field must be 8 bytes");
  ByteView b = take(8);
  std::uint64_t v = 0;
  for (auto x : b) v = v << 8 | x;
  return v;
}

ByteView Decoder::bytes() { return take(u32()); }

std::string Decoder::str() { return to_string(bytes()); }

void Decoder::expect_done() const {
  if (!done()) throw EncodingError("trailing bytes");
}

}  // namespace lisps::ledger
