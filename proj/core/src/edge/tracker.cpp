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

#include "lisps/edge/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lisps::edge {

std::vector<Point> Track::centroid_history() const {
  std::vector<Point> out;
  out.reserve(history.size());
  for (const auto& p : history) out.push_back(p.bbox.centroid());
  return out;
}

void EdgeConfig::validate() const {
  if (!(iou_threshold > 0.0 && iou_threshold < 1.0))
    throw std::invalid_argument("iou_threshold must be in (0,1)");
  if (!(heading_threshold_deg > 0.0 && heading_threshold_deg <= 180.0))
    throw std::invalid_argument("heading_threshold_deg must be in (0,180]");
  if (!(motion_epsilon >= 0.0)) throw std::invalid_argument("motion_epsilon must be >= 0");
  if (!(frame_rate > 0.0)) throw std::invalid_argument("frame_rate must be > 0");
  if (speed_window < 1) throw std::invalid_argument("speed_window must be >= 1");
}

Assignment associate(std::span<const Track> tracks, std::span<const Detection> detections,
                     double iou_threshold) {
  struct Candidate {
    double overlap;
    std::size_t track;
    std::size_t detection;
  };
  std::vector<Candidate> candidates;
  for (std::size_t t = 0; t < tracks.size(); ++t) {
    const auto& last = tracks[t].history.back().bbox;
    for (std::size_t d = 0; d < detections.size(); ++d) {
      const double v = iou(last, detections[d].bbox);
      if (v >= iou_threshold && v > 0.0) candidates.push_back({v, t, d});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [&](const Candidate& a, const Candidate& b) {
    if (a.overlap != b.overlap) return a.overlap > b.overlap;
    if (tracks[a.track].id != tracks[b.track].id) return tracks[a.track].id < tracks[b.track].id;
    return a.detection < b.detection;
  });

  std::vector<bool> track_used(tracks.size(), false);
  std::vector<bool> det_used(detections.size(), false);
  Assignment out;
  for (const auto& c : candidates) {
    if (track_used[c.track] || det_used[c.detection]) continue;
    track_used[c.track] = true;
    det_used[c.detection] = true;
    out.matched.emplace_back(c.track, c.detection);
  }
  for (std::size_t d = 0; d < detections.size(); ++d) {
    if (!det_used[d]) out.unmatched_detections.push_back(d);
  }
  for (std::size_t t = 0; t < tracks.size(); ++t) {
    if (!track_used[t]) out.lost_tracks.push_back(t);
  }
  return out;
}

double quantize_milli(double v) {
  const double q = std::round(v * 1000.0) / 1000.0;
  return q == 0.0 ? 0.0 : q;  // no negative zero
}

namespace {

double heading_delta_deg(double a, double b) {
  double d = std::fabs(a - b);
  d = std::fmod(d, 360.0);
  return d > 180.0 ? 360.0 - d : d;
}

}  // namespace

FeatureRecord extract_features(const Track& track, Timestamp frame_timestamp,
                               const EdgeConfig& config) {
  if (track.history.empty()) throw std::invalid_argument("extract_features: empty track");

  const auto centroids = track.centroid_history();
  std::vector<double> step_speed;
  std::vector<double> moving_headings;
  for (std::size_t i = 1; i < centroids.size(); ++i) {
    const double dx = centroids[i].x - centroids[i - 1].x;
    const double dy = centroids[i].y - centroids[i - 1].y;
    const auto gap = static_cast<double>(track.history[i].frame_index -
                                         track.history[i - 1].frame_index);
    const double v = std::hypot(dx, dy) / std::max(gap, 1.0);
    step_speed.push_back(v);
    if (v > config.motion_epsilon) {
      moving_headings.push_back(std::atan2(dy, dx) * 180.0 / std::numbers::pi);
    }
  }

  double speed = 0.0;
  if (!step_speed.empty()) {
    const std::size_t n = std::min<std::size_t>(step_speed.size(), config.speed_window);
    double sum = 0.0;
    for (std::size_t i = step_speed.size() - n; i < step_speed.size(); ++i) sum += step_speed[i];
    speed = sum / static_cast<double>(n);
  }

  int changes = 0;
  for (std::size_t i = 1; i < moving_headings.size(); ++i) {
    if (heading_delta_deg(moving_headings[i], moving_headings[i - 1]) >
        config.heading_threshold_deg) {
      ++changes;
    }
  }

  const auto& box = track.history.back().bbox;
  FeatureRecord rec;
  rec.object_id = track.id;
  rec.speed = quantize_milli(speed);
  rec.direction_changes = changes;
  rec.dwell = static_cast<double>(std::max<std::int64_t>(0, frame_timestamp.ms - track.id.ms)) /
              1000.0;
  rec.bbox = BoundingBox(quantize_milli(box.x_min()), quantize_milli(box.y_min()),
                         std::max(quantize_milli(box.x_max()), quantize_milli(box.x_min()) + 0.001),
                         std::max(quantize_milli(box.y_max()), quantize_milli(box.y_min()) + 0.001));
  return rec;
}

FrameResult process_frame(TrackerState state, std::span<const Detection> detections,
                          const FrameMeta& meta, const EdgeConfig& config) {
  if (state.last_frame_index && meta.frame_index <= *state.last_frame_index) {
    throw OrderingError("frame " + std::to_string(meta.frame_index) + " does not follow frame " +
                        std::to_string(*state.last_frame_index));
  }
  const Assignment assignment = associate(state.active, detections, config.iou_threshold);

  FrameResult result;
  for (const auto& [t, d] : assignment.matched) {
    state.active[t].history.push_back({meta.frame_index, detections[d].bbox});
  }

  std::vector<bool> lost(state.active.size(), false);
  for (std::size_t t : assignment.lost_tracks) {
    lost[t] = true;
    result.lost.push_back(state.active[t].id);
  }
  std::vector<Track> survivors;
  survivors.reserve(state.active.size() + assignment.unmatched_detections.size());
  for (std::size_t t = 0; t < state.active.size(); ++t) {
    if (!lost[t]) survivors.push_back(std::move(state.active[t]));
  }

  // Ids are first-detection times. Several objects first seen in the same
  // frame are separated by 1 ms so ids stay unique and are never reused.
  for (std::size_t d : assignment.unmatched_detections) {
    ObjectId id = meta.timestamp;
    if (state.last_issued_id && id <= *state.last_issued_id) {
      id = Timestamp{state.last_issued_id->ms + 1};
    }
    state.last_issued_id = id;
    Track track{id, {{meta.frame_index, detections[d].bbox}}, TrackState::kActive};
    survivors.push_back(std::move(track));
    result.new_tracks.emplace_back(id, d);
  }
  state.active = std::move(survivors);
  state.last_frame_index = meta.frame_index;

  result.features.frame_index = meta.frame_index;
  result.features.camera_id = state.camera_id;
  result.features.timestamp = meta.timestamp;
  for (const auto& track : state.active) {
    result.features.objects.emplace(track.id, extract_features(track, meta.timestamp, config));
  }
  result.state = std::move(state);
  return result;
}

}  // namespace lisps::edge
