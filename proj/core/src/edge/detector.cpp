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

#include "lisps/edge/detector.hpp"

#include <algorithm>
#include <stdexcept>

namespace lisps::edge {

std::vector<Detection> GroundTruthDetector::detect(std::int64_t frame_index) {
  if (frame_index < 0 || static_cast<std::size_t>(frame_index) >= script_->size()) return {};
  return (*script_)[static_cast<std::size_t>(frame_index)];
}

std::vector<Detection> NoisyDetector::detect(std::int64_t frame_index) {
  if (frame_index < 0 || static_cast<std::size_t>(frame_index) >= script_->size()) return {};
  std::seed_seq seq{static_cast<std::uint32_t>(noise_.seed), static_cast<std::uint32_t>(noise_.seed >> 32),
                    static_cast<std::uint32_t>(frame_index),
                    static_cast<std::uint32_t>(static_cast<std::uint64_t>(frame_index) >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> jitter(0.0, noise_.jitter_px);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  std::vector<Detection> out;
  for (const auto& d : (*script_)[static_cast<std::size_t>(frame_index)]) {
    const double j[4] = {jitter(rng), jitter(rng), jitter(rng), jitter(rng)};
    if (coin(rng) < noise_.dropout) continue;
    double x0 = std::max(0.0, d.bbox.x_min() + j[0]);
    double y0 = std::max(0.0, d.bbox.y_min() + j[1]);
    double x1 = std::max(x0 + 1.0, d.bbox.x_max() + j[2]);
    double y1 = std::max(y0 + 1.0, d.bbox.y_max() + j[3]);
    out.push_back({BoundingBox(x0, y0, x1, y1), d.confidence, d.frame_index});
  }
  return out;
}

std::unique_ptr<Detector> make_detector(const std::string& backend,
                                        std::shared_ptr<const DetectionScript> script,
                                        NoiseModel noise) {
  if (backend == "ground_truth") return std::make_unique<GroundTruthDetector>(std::move(script));
  if (backend == "noisy") return std::make_unique<NoisyDetector>(std::move(script), noise);
  throw std::invalid_argument("unknown detector backend: " + backend);
}

}  // namespace lisps::edge
