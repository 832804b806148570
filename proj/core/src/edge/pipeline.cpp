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

#include "lisps/edge/pipeline.hpp"

#include <cmath>

namespace lisps::edge {

EdgeConfig edge_config_from(const Config& cfg) {
  EdgeConfig c;
  c.iou_threshold = cfg.get_double("edge.iou_threshold", c.iou_threshold);
  c.heading_threshold_deg = cfg.get_double("edge.heading_threshold_deg", c.heading_threshold_deg);
  c.motion_epsilon = cfg.get_double("edge.motion_epsilon", c.motion_epsilon);
  c.frame_rate = cfg.get_double("edge.frame_rate", c.frame_rate);
  c.speed_window = static_cast<int>(cfg.get_int("edge.speed_window", c.speed_window));
  c.validate();
  return c;
}

Timestamp frame_timestamp(Timestamp epoch, std::int64_t frame_index, double frame_rate) {
  return Timestamp{epoch.ms + std::llround(static_cast<double>(frame_index) * 1000.0 / frame_rate)};
}

EdgePipeline::EdgePipeline(std::string camera_id, EdgeConfig config,
                           std::unique_ptr<Detector> detector, Timestamp epoch)
    : config_(config), detector_(std::move(detector)), epoch_(epoch) {
  config_.validate();
  state_.camera_id = std::move(camera_id);
}

FrameResult EdgePipeline::step(std::int64_t frame_index) {
  const auto detections = detector_->detect(frame_index);
  FrameMeta meta{frame_index, frame_timestamp(epoch_, frame_index, config_.frame_rate)};
  FrameResult result = process_frame(state_, detections, meta, config_);
  state_ = result.state;
  return result;
}

}  // namespace lisps::edge
