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

// IoU tracking and movement-feature extraction for one camera.
//
// The tracker keeps a queue of active tracks. Each frame the detector's boxes
// are matched greedily against the queue in descending IoU order; a track
// with no detection above the IoU threshold is dropped from the queue and
// reported lost, and every unmatched detection opens a new track whose id is
// the frame timestamp. After association every active track yields one
// FeatureRecord, and the records of a frame form a FrameFeatureSet.

#ifndef LISPS_EDGE_TRACKER_HPP_
#define LISPS_EDGE_TRACKER_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lisps/common/time.hpp"
#include "lisps/edge/geometry.hpp"

namespace lisps::edge {

struct Detection {
  BoundingBox bbox;
  double confidence = 1.0;
  std::int64_t frame_index = 0;
};

enum class TrackState { kActive, kLost };

struct TrackPoint {
  std::int64_t frame_index;
  BoundingBox bbox;
};

struct Track {
  ObjectId id;
  std::vector<TrackPoint> history;
  TrackState state = TrackState::kActive;

  std::vector<Point> centroid_history() const;
};

struct FeatureRecord {
  ObjectId object_id;
  double speed = 0.0;  // px/frame
  int direction_changes = 0;
  double dwell = 0.0;  // seconds
  BoundingBox bbox{0, 0, 1, 1};

  friend bool operator==(const FeatureRecord&, const FeatureRecord&) = default;
};

struct FrameFeatureSet {
  std::int64_t frame_index = 0;
  std::string camera_id;
  Timestamp timestamp;
  std::map<ObjectId, FeatureRecord> objects;

  friend bool operator==(const FrameFeatureSet&, const FrameFeatureSet&) = default;
};

struct EdgeConfig {
  double iou_threshold = 0.3;
  double heading_threshold_deg = 45.0;
  double motion_epsilon = 0.5;  // px/frame
  double frame_rate = 5.0;
  // 1 = instantaneous speed over the last step.
  int speed_window = 1;

  void validate() const;
};

struct Assignment {
  std::vector<std::pair<std::size_t, std::size_t>> matched;  // (track, detection)
  std::vector<std::size_t> unmatched_detections;
  std::vector<std::size_t> lost_tracks;
};

// Greedy matching in descending IoU; ties go to the lower track id, then the
// lower detection index. Pairs below `iou_threshold` are never matched.
Assignment associate(std::span<const Track> tracks, std::span<const Detection> detections,
                     double iou_threshold);

// Rounds to the nearest multiple of 0.001 so records survive the 3-decimal
// wire encoding unchanged.
double quantize_milli(double v);

FeatureRecord extract_features(const Track& track, Timestamp frame_timestamp,
                               const EdgeConfig& config);

class OrderingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrackerState {
  std::string camera_id;
  std::vector<Track> active;
  std::optional<std::int64_t> last_frame_index;
  std::optional<ObjectId> last_issued_id;
};

struct FrameMeta {
  std::int64_t frame_index = 0;
  Timestamp timestamp;
};

struct FrameResult {
  TrackerState state;
  FrameFeatureSet features;
  std::vector<std::pair<ObjectId, std::size_t>> new_tracks;  // (id, detection index)
  std::vector<ObjectId> lost;
};

// Pure: same inputs give the same outputs. Throws OrderingError when
// `meta.frame_index` does not advance.
FrameResult process_frame(TrackerState state, std::span<const Detection> detections,
                          const FrameMeta& meta, const EdgeConfig& config);

}  // namespace lisps::edge

#endif  // LISPS_EDGE_TRACKER_HPP_
