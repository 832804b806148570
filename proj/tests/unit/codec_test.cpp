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

#include <gtest/gtest.h>

#include <random>

#include "lisps/wire/codec.hpp"
#include "printers.hpp"
#include "random_frames.hpp"

namespace lisps::wire {
namespace {

using edge::BoundingBox;

using test::random_frame;

std::vector<FrameFeatureSet> feed_all(FrameAssembler& a, std::string_view bytes) {
  std::vector<FrameFeatureSet> out;
  for (auto& b : a.feed(bytes)) out.push_back(std::move(b.frame));
  return out;
}

TEST(EncodeFrame, EmptyFrame) {
  FrameFeatureSet f{7, "cam-01", Timestamp{100'000}, {}};
  EXPECT_EQ(encode_frame(f), "FRAME 7\nCAM cam-01\nTS 100.000\nEND 7\n");
}

TEST(EncodeFrame, OneObject) {
  FrameFeatureSet f{7, "cam-01", Timestamp{100'000}, {}};
  FeatureRecord r{Timestamp{90'200}, 5.0, 1, 9.8, BoundingBox(0, 0, 10, 10)};
  f.objects.emplace(r.object_id, r);
  EXPECT_EQ(encode_frame(f),
            "FRAME 7\nCAM cam-01\nTS 100.000\n"
            "OBJ 90.200 SPEED=5.000 DIRCH=1 DWELL=9.800 BBOX=0.000,0.000,10.000,10.000\n"
            "END 7\n");
}

TEST(EncodeFrame, ObjectsInAscendingIdOrder) {
  FrameFeatureSet f{1, "c", Timestamp{5000}, {}};
  for (std::int64_t id : {4000, 1000, 3000}) {
    f.objects.emplace(Timestamp{id}, FeatureRecord{Timestamp{id}, 0, 0, 0, BoundingBox(0, 0, 1, 1)});
  }
  const std::string s = encode_frame(f);
  EXPECT_LT(s.find("OBJ 1.000"), s.find("OBJ 3.000"));
  EXPECT_LT(s.find("OBJ 3.000"), s.find("OBJ 4.000"));
}

TEST(EncodeFrame, RejectsCameraIdThatBreaksTheGrammar) {
  FrameFeatureSet f{1, "cam 01", Timestamp{0}, {}};
  EXPECT_THROW(encode_frame(f), std::invalid_argument);
  f.camera_id = "cam\n01";
  EXPECT_THROW(encode_frame(f), std::invalid_argument);
}

TEST(DecodeFrame, RoundTripAndCanonicalOnRandomFrames) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 1000; ++i) {
    const FrameFeatureSet f = random_frame(rng);
    const std::string bytes = encode_frame(f);
    auto r = decode_frame(bytes);
    auto* done = std::get_if<Complete>(&r);
    ASSERT_NE(done, nullptr);
    EXPECT_EQ(done->frame, f);
    EXPECT_EQ(done->consumed, bytes.size());
    EXPECT_EQ(encode_frame(done->frame), bytes);
  }
}

TEST(DecodeFrame, TruncatedBufferIsIncomplete) {
  const std::string bytes = encode_frame({7, "cam-01", Timestamp{100'000}, {}});
  EXPECT_TRUE(std::holds_alternative<Incomplete>(decode_frame(bytes.substr(0, 10))));
  for (std::size_t n = 0; n < bytes.size(); ++n) {
    EXPECT_TRUE(std::holds_alternative<Incomplete>(decode_frame(bytes.substr(0, n)))) << n;
  }
}

TEST(DecodeFrame, ConsumedEqualsBlockLengthWithTrailingBytes) {
  FrameFeatureSet f{3, "cam-01", Timestamp{1234}, {}};
  f.objects.emplace(Timestamp{1000},
                    FeatureRecord{Timestamp{1000}, 1.5, 2, 0.234, BoundingBox(1, 2, 3, 4)});
  const std::string block = encode_frame(f);
  auto r = decode_frame(block + "FRAME 4\nCA");
  ASSERT_TRUE(std::holds_alternative<Complete>(r));
  EXPECT_EQ(std::get<Complete>(r).consumed, block.size());
  EXPECT_EQ(std::get<Complete>(r).frame, f);
}

TEST(DecodeFrame, MismatchedEndIsFramingError) {
  EXPECT_THROW(decode_frame("FRAME 1\nCAM c\nTS 0.000\nEND 2\n"), FramingError);
}

TEST(DecodeFrame, MalformedLineNamesLineNumber) {
  const std::string bad =
      "FRAME 1\nCAM c\nTS 0.000\n"
      "OBJ 1.000 SPEED=1.000 DIRCH=0 DWELL=0.000 BBOX=0.000,0.000,1.000,1.000\n"
      "OBJ 2.000 SPEED=x DIRCH=0 DWELL=0.000 BBOX=0.000,0.000,1.000,1.000\n"
      "END 1\n";
  try {
    decode_frame(bad);
    FAIL() << "expected DecodeError";
  } catch (const FramingError&) {
    FAIL() << "not a framing error";
  } catch (const DecodeError& e) {
    EXPECT_EQ(e.line(), 5u);
  }
}

TEST(DecodeFrame, RejectsNonCanonicalForms) {
  const std::string head = "FRAME 1\nCAM c\nTS 0.000\n";
  for (const char* obj : {
           "OBJ 1.000 SPEED=1.0 DIRCH=0 DWELL=0.000 BBOX=0.000,0.000,1.000,1.000",
           "OBJ 1.000 SPEED=-1.000 DIRCH=0 DWELL=0.000 BBOX=0.000,0.000,1.000,1.000",
           "OBJ 1.000 SPEED=1.000 DIRCH=01 DWELL=0.000 BBOX=0.000,0.000,1.000,1.000",
           "OBJ 1.000 SPEED=1.000 DIRCH=0 DWELL=0.000 BBOX=1.000,0.000,1.000,1.000",
           "OBJ 1.000 SPEED=1.000 DIRCH=0 DWELL=0.000 BBOX=0.000,0.000,1.000,1.000 ",
           "OBJ 1.000  SPEED=1.000 DIRCH=0 DWELL=0.000 BBOX=0.000,0.000,1.000,1.000",
       }) {
    EXPECT_THROW(decode_frame(head + obj + "\nEND 1\n"), DecodeError) << obj;
  }
  EXPECT_THROW(decode_frame("FRAME 01\nCAM c\nTS 0.000\nEND 1\n"), DecodeError);
  EXPECT_THROW(decode_frame("FRAME 1\r\nCAM c\nTS 0.000\nEND 1\n"), DecodeError);
  EXPECT_THROW(decode_frame("FRAME 1\nCAM c\nTS 0.5\nEND 1\n"), DecodeError);
}

TEST(DecodeFrame, DuplicateOrUnsortedIdsAreRejected) {
  const std::string head = "FRAME 1\nCAM c\nTS 0.000\n";
  const std::string a = "OBJ 2.000 SPEED=1.000 DIRCH=0 DWELL=0.000 BBOX=0.000,0.000,1.000,1.000\n";
  const std::string b = "OBJ 1.000 SPEED=1.000 DIRCH=0 DWELL=0.000 BBOX=0.000,0.000,1.000,1.000\n";
  EXPECT_THROW(decode_frame(head + a + b + "END 1\n"), DecodeError);
  EXPECT_THROW(decode_frame(head + a + a + "END 1\n"), DecodeError);
}

TEST(DecodeFrame, GarbageFirstLineFailsWithoutWaiting) {
  EXPECT_THROW(decode_frame("HELLO"), DecodeError);
  EXPECT_TRUE(std::holds_alternative<Incomplete>(decode_frame("FRA")));
}

TEST(FrameAssembler, ChunkingInvarianceOverRandomPartitions) {
  std::mt19937_64 rng(5);
  std::string stream;
  std::vector<FrameFeatureSet> frames;
  for (int i = 0; i < 40; ++i) {
    frames.push_back(random_frame(rng));
    stream += encode_frame(frames.back());
  }

  FrameAssembler bulk;
  EXPECT_EQ(feed_all(bulk, stream), frames);

  FrameAssembler bytewise;
  std::vector<FrameFeatureSet> got;
  for (char c : stream) {
    for (auto& f : feed_all(bytewise, std::string_view(&c, 1))) got.push_back(std::move(f));
  }
  EXPECT_EQ(got, frames);

  for (int trial = 0; trial < 50; ++trial) {
    FrameAssembler a;
    std::vector<FrameFeatureSet> out;
    std::uniform_int_distribution<std::size_t> cut(1, 300);
    for (std::size_t pos = 0; pos < stream.size();) {
      const std::size_t n = std::min(cut(rng), stream.size() - pos);
      for (auto& f : feed_all(a, std::string_view(stream).substr(pos, n))) out.push_back(std::move(f));
      pos += n;
    }
    EXPECT_EQ(out, frames);
    EXPECT_EQ(a.buffered(), 0u);
  }
}

TEST(FrameAssembler, RawBytesConcatenateToInput) {
  std::mt19937_64 rng(8);
  std::string stream;
  for (int i = 0; i < 10; ++i) stream += encode_frame(random_frame(rng));
  FrameAssembler a;
  std::string raw;
  for (std::size_t pos = 0; pos < stream.size(); pos += 7) {
    for (auto& b : a.feed(std::string_view(stream).substr(pos, 7))) raw += b.raw;
  }
  EXPECT_EQ(raw, stream);
}

TEST(FrameAssembler, OversizedUnterminatedBlockIsAnError) {
  FrameAssembler a(64);
  std::string junk = "FRAME 1\nCAM c\nTS 0.000\n";
  junk += std::string(100, 'O');
  EXPECT_THROW(a.feed(junk), DecodeError);
}

}  // namespace
}  // namespace lisps::wire
