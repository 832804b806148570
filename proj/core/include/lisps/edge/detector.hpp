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

#ifndef LISPS_EDGE_DETECTOR_HPP_
#define LISPS_EDGE_DETECTOR_HPP_

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "lisps/edge/tracker.hpp"

namespace lisps::edge {

// Source of per-frame person detections. Backends stand in for a CNN.
class Detector {
 public:
  virtual ~Detector() = default;
  virtual std::vector<Detection> detect(std::int64_t frame_index) = 0;
};

// Per-frame ground-truth boxes, indexed by frame.
using DetectionScript = std::vector<std::vector<Detection>>;

class GroundTruthDetector final : public Detector {
 public:
  explicit GroundTruthDetector(std::shared_ptr<const DetectionScript> script)
      : script_(std::move(script)) {}

  std::vector<Detection> detect(std::int64_t frame_index) override;

 private:
  std::shared_ptr<const DetectionScript> script_;
};

struct NoiseModel {
  double jitter_px = 1.0;     // stddev of per-coordinate Gaussian jitter
  double dropout = 0.0;       // per-detection miss probability
  std::uint64_t seed = 0;
};

// Ground truth with seeded jitter and dropout. Output for a frame depends
// only on (seed, frame index), so replays are reproducible regardless of
// call history.
class NoisyDetector final : public Detector {
 public:
  NoisyDetector(std::shared_ptr<const DetectionScript> script, NoiseModel noise)
      : script_(std::move(script)), noise_(noise) {}

  std::vector<Detection> detect(std::int64_t frame_index) override;

 private:
  std::shared_ptr<const DetectionScript> script_;
  NoiseModel noise_;
};

// backend: "ground_truth" or "noisy".
std::unique_ptr<Detector> make_detector(const std::string& backend,
                                        std::shared_ptr<const DetectionScript> script,
                                        NoiseModel noise);

}  // namespace lisps::edge

#endif  // LISPS_EDGE_DETECTOR_HPP_
