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


#ifndef LISPS_SIM_REPLAY_HPP_
#define LISPS_SIM_REPLAY_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lisps/common/config.hpp"
#include "lisps/fog/alerts.hpp"
#include "lisps/fog/assessor.hpp"
#include "lisps/fog/node.hpp"
#include "lisps/sim/scenario.hpp"

namespace lisps::sim {

// Shared by the fog service and the replay.
struct DecisionSettings {
  double threshold = 0.6;
  std::int64_t cooldown_ms = 30'000;
  int utc_offset_minutes = 0;
  std::string receiver = "security-desk";

  // Reads [fog] threshold, cooldown_s, utc_offset_minutes, receiver.
  static DecisionSettings from(const Config& cfg);
};

// [fog] rulebase (a file path; the default rulebase when unset), factor
// table and [edge] frame_rate.
std::shared_ptr<const fog::SuspicionAssessor> assessor_from(const Config& cfg);

// Feed settings for one camera: [fog] time_class ("auto" or a class),
// location and security, each overridable per camera as
// <key>.<camera_id>.
fog::CameraFeed feed_from(const Config& cfg, const std::string& camera_id, Endpoint edge = {});

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
  std::size_t total() const { return tp + fp + fn + tn; }
};

// Positive = labeled suspicious; predicted = alerted at least once.
Confusion confusion(const Scenario& scenario, const std::vector<bool>& alerted);

using TrackKey = std::pair<std::string, ObjectId>;  // (camera, object id)

// Maps each track of one camera to the actor that produced it by replaying
// the edge pipeline.
std::map<TrackKey, std::size_t> attribute_tracks(const Scenario& scenario,
                                                 const std::string& camera_id,
                                                 const Config& cfg);

struct ReplayResult {
  std::vector<fog::Alert> alerts;
  std::map<TrackKey, double> peak_score;
  std::map<TrackKey, std::size_t> track_actor;
  std::vector<double> actor_peak;  // indexed like scenario.actors()
  std::vector<bool> actor_alerted;
  std::int64_t frames = 0;
  Confusion confusion;
};

// Runs every camera through the edge pipeline, the wire encoding and the
// fog decision path on the calling thread.
ReplayResult replay_scenario(const Scenario& scenario, const Config& cfg);

}  // namespace lisps::sim

#endif  // LISPS_SIM_REPLAY_HPP_
