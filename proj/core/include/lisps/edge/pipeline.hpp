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

#ifndef LISPS_EDGE_PIPELINE_HPP_
#define LISPS_EDGE_PIPELINE_HPP_

#include <memory>
#include <string>

#include "lisps/common/config.hpp"
#include "lisps/edge/detector.hpp"
#include "lisps/edge/tracker.hpp"

namespace lisps::edge {

// Reads [edge] keys: iou_threshold, heading_threshold_deg, motion_epsilon,
// frame_rate, speed_window.
EdgeConfig edge_config_from(const Config& cfg);

// Capture time of a frame: epoch + index / frame_rate, rounded to the ms.
Timestamp frame_timestamp(Timestamp epoch, std::int64_t frame_index, double frame_rate);

// Sequential per-camera pipeline. Single writer; callers publish the
// returned FrameFeatureSet for readers.
class EdgePipeline {
 public:
  EdgePipeline(std::string camera_id, EdgeConfig config, std::unique_ptr<Detector> detector,
               Timestamp epoch);

  FrameResult step(std::int64_t frame_index);

  const TrackerState& state() const { return state_; }
  const EdgeConfig& config() const { return config_; }

 private:
  EdgeConfig config_;
  std::unique_ptr<Detector> detector_;
  Timestamp epoch_;
  TrackerState state_;
};

}  // namespace lisps::edge

#endif  // LISPS_EDGE_PIPELINE_HPP_
