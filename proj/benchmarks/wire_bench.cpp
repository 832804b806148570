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


#include <benchmark/benchmark.h>

#include <algorithm>
#include <cstdint>
#include <string>

#include "lisps/edge/tracker.hpp"
#include "lisps/wire/codec.hpp"

namespace {

using namespace lisps;

edge::FrameFeatureSet sample_frame(int objects) {
  edge::FrameFeatureSet f;
  f.frame_index = 1234;
  f.camera_id = "cam-01";
  f.timestamp = Timestamp::from_ms(1772460000000);
  for (int i = 1; i <= objects; ++i) {
    edge::FeatureRecord r;
    r.object_id = ObjectId::from_ms(1772459990000 + i);
    r.speed = 12.5 + i;
    r.direction_changes = i % 3;
    r.dwell = 4.25 * i;
    r.bbox = edge::BoundingBox(10.0 * i, 20.0, 10.0 * i + 40.0, 120.0);
    f.objects.emplace(r.object_id, r);
  }
  return f;
}

void BM_EncodeFrame(benchmark::State& state) {
  const auto f = sample_frame(static_cast<int>(state.range(0)));
  std::int64_t bytes = 0;
  for (auto _ : state) {
    std::string s = wire::encode_frame(f);
    bytes += static_cast<std::int64_t>(s.size());
    benchmark::DoNotOptimize(s);
  }
  state.SetBytesProcessed(bytes);
}
BENCHMARK(BM_EncodeFrame)->Arg(1)->Arg(10)->Arg(50);

void BM_DecodeFrame(benchmark::State& state) {
  const std::string s = wire::encode_frame(sample_frame(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(wire::decode_frame(s));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(s.size()));
}
BENCHMARK(BM_DecodeFrame)->Arg(1)->Arg(10)->Arg(50);

// Reassembly cost when the stream arrives in small chunks.
void BM_AssemblerChunked(benchmark::State& state) {
  const std::size_t chunk = static_cast<std::size_t>(state.range(0));
  std::string stream;
  for (int i = 0; i < 20; ++i) stream += wire::encode_frame(sample_frame(10));
  for (auto _ : state) {
    wire::FrameAssembler a;
    std::size_t frames = 0;
    for (std::size_t p = 0; p < stream.size(); p += chunk) {
      frames += a.feed(std::string_view(stream).substr(p, chunk)).size();
    }
    benchmark::DoNotOptimize(frames);
  }
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(stream.size()));
}
BENCHMARK(BM_AssemblerChunked)->Arg(16)->Arg(256)->Arg(4096);

}  // namespace
