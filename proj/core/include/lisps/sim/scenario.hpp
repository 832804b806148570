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


// Seeded synthetic scenes for the harness.
//
// Every actor owns a horizontal lane of its camera's frame, so boxes of
// different actors never overlap and each track can be attributed to the
// actor that produced it.

#ifndef LISPS_SIM_SCENARIO_HPP_
#define LISPS_SIM_SCENARIO_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lisps/common/config.hpp"
#include "lisps/common/time.hpp"
#include "lisps/edge/detector.hpp"
#include "lisps/edge/geometry.hpp"

namespace lisps::sim {

enum class ActorKind { kWalker, kLoiterer, kWanderer };

std::string_view to_string(ActorKind k);

// Walkers cross the frame at near-constant velocity, loiterers drift slowly
// around an anchor, wanderers pace back and forth with frequent reversals.
struct ActorScript {
  std::string id;
  ActorKind kind = ActorKind::kWalker;
  std::string camera_id;
  std::int64_t entry_frame = 0;
  std::int64_t exit_frame = 0;  // exclusive
  double x0 = 0.0;              // box corner at entry, or the drift anchor
  double y0 = 0.0;
  double box_w = 40.0;
  double box_h = 100.0;
  double velocity = 0.0;   // px/frame, signed; walkers and wanderers
  double amplitude = 0.0;  // px; loiterers
  std::int64_t period = 1;  // frames; loiterer drift cycle or wanderer leg

  // Only loiterers are labeled suspicious.
  bool suspicious() const { return kind == ActorKind::kLoiterer; }
};

struct ScenarioParams {
  std::int64_t frames = 150;
  double frame_rate = 5.0;
  double width = 1280.0;
  double height = 720.0;
  std::vector<std::string> cameras{"cam-01"};
  // Simultaneous actors per camera.
  int walkers = 1;
  int loiterers = 1;
  int wanderers = 1;
  // A walker that leaves is replaced by a new one in the same lane.
  bool respawn = true;
  // Capture time of frame 0.
  Timestamp epoch = Timestamp::from_ms(1772460000000);  // 2026-03-02T14:00:00Z

  // Reads [sim] duration_s, width, height, cameras (comma separated),
  // walkers, loiterers, wanderers, respawn, epoch (ISO-8601) and
  // [edge] frame_rate.
  static ScenarioParams from(const Config& cfg);
};

class Scenario {
 public:
  Scenario(std::uint64_t seed, ScenarioParams params, std::vector<ActorScript> actors);

  std::uint64_t seed() const { return seed_; }
  const ScenarioParams& params() const { return params_; }
  const std::vector<ActorScript>& actors() const { return actors_; }

  // Ground-truth box of `actor` in `frame`, or nullopt when absent.
  std::optional<edge::BoundingBox> box_at(const ActorScript& actor, std::int64_t frame) const;

  // Per-frame ground truth of one camera, ordered by actor.
  edge::DetectionScript detections(const std::string& camera_id) const;

  // The actor on `camera_id` whose box overlaps `box` most in `frame`.
  std::optional<std::size_t> actor_at(const std::string& camera_id, std::int64_t frame,
                                      const edge::BoundingBox& box) const;

  // One line per actor; equal scenarios give equal text.
  std::string describe() const;

 private:
  std::uint64_t seed_;
  ScenarioParams params_;
  std::vector<ActorScript> actors_;
};

// Throws ConfigError on bad parameters.
Scenario generate_scenario(const ScenarioParams& params, std::uint64_t seed);

// Detector for one camera of `scenario` as configured by [edge] detector
// ("ground_truth" or "noisy"), jitter_px and dropout. Noise is seeded from
// the scenario seed and the camera id.
std::unique_ptr<edge::Detector> scenario_detector(const Scenario& scenario,
                                                  const std::string& camera_id,
                                                  const Config& cfg);

}  // namespace lisps::sim

#endif  // LISPS_SIM_SCENARIO_HPP_
