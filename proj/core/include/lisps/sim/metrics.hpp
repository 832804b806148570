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


// Event logs written by the services during a run, and the metrics the
// harness derives from them afterwards.
//
//   edge:  FRAME cam=<id> frame=<idx> ts=<s.3dp> capture=<s.3dp> published=<s.3dp>
//          missed=<0|1> objects=<n> bytes=<n>
//   fog:   FRAME cam=<id> frame=<idx> ts=<s.3dp> recv=<s.3dp> done=<s.3dp>
//          proc_us=<n> objects=<n> alerts=<n>
//          ALERT cam=<id> frame=<idx> obj=<id.3dp> score=<v.3dp> done=<s.3dp>
//
// Wall-clock fields are seconds since the Unix epoch.

#ifndef LISPS_SIM_METRICS_HPP_
#define LISPS_SIM_METRICS_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lisps/edge/service.hpp"
#include "lisps/fog/node.hpp"
#include "lisps/sim/replay.hpp"

namespace lisps::sim {

std::string format_edge_event(const edge::FrameEvent& e);
// The FRAME line followed by one ALERT line per alert, each LF-terminated.
std::string format_fog_event(const fog::FrameReport& r);

struct EventLine {
  std::string kind;
  std::map<std::string, std::string> fields;

  const std::string& at(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  Timestamp time(const std::string& key) const;
};

// Throws std::invalid_argument on a malformed line.
EventLine parse_event(std::string_view line);
// Skips a torn final line.
std::vector<EventLine> read_events(const std::filesystem::path& path);

// Linear interpolation between closest ranks; q in [0, 1]. Empty input
// gives 0.
double percentile(std::vector<double> values, double q);

struct CameraMetrics {
  std::int64_t edge_frames = 0;
  double edge_fps = 0.0;
  std::int64_t missed_deadlines = 0;
  std::int64_t fog_frames = 0;
  // Edge frames that never reached the fog log.
  std::int64_t frames_missing = 0;
};

struct Metrics {
  std::map<std::string, CameraMetrics> cameras;
  std::vector<double> fog_frame_ms;       // per-frame fog processing time
  std::vector<double> decision_ms;        // frame capture to fog decision, every frame
  std::vector<double> alert_latency_ms;   // frame capture to alert sink append
  std::size_t alerts = 0;
  std::optional<Confusion> confusion;

  // One line per metric, reals with three decimals.
  std::string format() const;
};

// Joins edge and fog events on (camera, frame index). `track_actor`, when
// given, attributes alerts to scenario actors for the confusion counts.
Metrics compute_metrics(const std::vector<EventLine>& edge_events,
                        const std::vector<EventLine>& fog_events, const Scenario* scenario,
                        const std::map<TrackKey, std::size_t>* track_actor);

}  // namespace lisps::sim

#endif  // LISPS_SIM_METRICS_HPP_
