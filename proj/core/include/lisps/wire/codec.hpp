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

// Text encoding of per-frame feature dictionaries.
//
//   FRAME <idx>
//   CAM <camera-id>
//   TS <seconds.3dp>
//   OBJ <id.3dp> SPEED=<v.3dp> DIRCH=<int> DWELL=<v.3dp> BBOX=<x0>,<y0>,<x1>,<y1>   (0..n)
//   END <idx>
//
// Lines end with a single LF. Objects appear in ascending id order and every
// real has exactly three decimals, so each frame has exactly one encoding.

#ifndef LISPS_WIRE_CODEC_HPP_
#define LISPS_WIRE_CODEC_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lisps/edge/tracker.hpp"

namespace lisps::wire {

using edge::FeatureRecord;
using edge::FrameFeatureSet;

class DecodeError : public std::runtime_error {
 public:
  DecodeError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// FRAME and END carry different indices.
class FramingError : public DecodeError {
 public:
  using DecodeError::DecodeError;
};

struct Incomplete {};

struct Complete {
  FrameFeatureSet frame;
  std::size_t consumed = 0;
};

using DecodeResult = std::variant<Incomplete, Complete>;

// Camera ids are restricted to [A-Za-z0-9._-]+ so they fit on one line.
bool is_valid_camera_id(std::string_view id);

std::string encode_frame(const FrameFeatureSet& frame);

// Decodes the block at the start of `buffer`. Returns Incomplete until a
// whole FRAME..END block is present; bytes after the block are not read.
DecodeResult decode_frame(std::string_view buffer);

// "OBJ ..." line body without the trailing LF; shared with the fog's
// reference store.
std::string encode_object_line(const FeatureRecord& rec);
// Throws std::invalid_argument on malformed input.
FeatureRecord decode_object_line(std::string_view line);

std::string format_real(double v);

// Reassembles frames from an arbitrarily chunked byte stream.
class FrameAssembler {
 public:
  struct Block {
    FrameFeatureSet frame;
    std::string raw;
  };

  explicit FrameAssembler(std::size_t max_buffer = 1 << 20) : max_buffer_(max_buffer) {}

  // Returns every frame completed by `bytes`, in stream order. Throws
  // DecodeError on a malformed block or when an unterminated block
  // outgrows the buffer limit.
  std::vector<Block> feed(std::string_view bytes);

  std::size_t buffered() const { return buffer_.size(); }

 private:
  std::size_t max_buffer_;
  std::string buffer_;
};

}  // namespace lisps::wire

#endif  // LISPS_WIRE_CODEC_HPP_
