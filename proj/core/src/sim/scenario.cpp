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


#include "lisps/sim/scenario.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "lisps/wire/codec.hpp"

namespace lisps::sim {

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("not a boolean: " + s);
}

std::size_t camera_index(const ScenarioParams& p, const std::string& camera_id) {
  const auto it = std::find(p.cameras.begin(), p.cameras.end(), camera_id);
  if (it == p.cameras.end()) throw ConfigError("camera not in scenario: " + camera_id);
  return static_cast<std::size_t>(it - p.cameras.begin());
}

}  // namespace

std::string_view to_string(ActorKind k) {
  switch (k) {
    case ActorKind::kWalker: return "walker";
    case ActorKind::kLoiterer: return "loiterer";
    case ActorKind::kWanderer: return "wanderer";
  }
  return "unknown";
}

ScenarioParams ScenarioParams::from(const Config& cfg) {
  ScenarioParams p;
  p.frame_rate = cfg.get_double("edge.frame_rate", p.frame_rate);
  const double duration = cfg.get_double("sim.duration_s", p.frames / p.frame_rate);
  p.frames = std::llround(duration * p.frame_rate);
  p.width = cfg.get_double("sim.width", p.width);
  p.height = cfg.get_double("sim.height", p.height);
  if (auto cams = cfg.get("sim.cameras")) p.cameras = split_list(*cams);
  p.walkers = static_cast<int>(cfg.get_int("sim.walkers", p.walkers));
  p.loiterers = static_cast<int>(cfg.get_int("sim.loiterers", p.loiterers));
  p.wanderers = static_cast<int>(cfg.get_int("sim.wanderers", p.wanderers));
  if (auto r = cfg.get("sim.respawn")) p.respawn = parse_bool(*r);
  if (auto e = cfg.get("sim.epoch")) {
    try {
      p.epoch = parse_iso8601(*e);
    } catch (const std::invalid_argument& err) {
      throw ConfigError(std::string("sim.epoch: ") + err.what());
    }
  }
  return p;
}

Scenario::Scenario(std::uint64_t seed, ScenarioParams params, std::vector<ActorScript> actors)
    : seed_(seed), params_(std::move(params)), actors_(std::move(actors)) {
  std::set<std::string> ids;
  for (const auto& a : actors_) {
    if (!ids.insert(a.id).second) throw ConfigError("duplicate actor id " + a.id);
    camera_index(params_, a.camera_id);
    if (a.exit_frame <= a.entry_frame || a.period < 1 || a.box_w <= 0 || a.box_h <= 0) {
      throw ConfigError("bad script for actor " + a.id);
    }
  }
}

std::optional<edge::BoundingBox> Scenario::box_at(const ActorScript& a, std::int64_t frame) const {
  if (frame < a.entry_frame || frame >= a.exit_frame) return std::nullopt;
  const double t = static_cast<double>(frame - a.entry_frame);
  double x = a.x0;
  double y = a.y0;
  switch (a.kind) {
    case ActorKind::kWalker:
      x += a.velocity * t;
      break;
    case ActorKind::kLoiterer: {
      const double phase = 2.0 * std::numbers::pi * t / static_cast<double>(a.period);
      x += a.amplitude * std::sin(phase);
      y += 0.5 * a.amplitude * std::sin(2.0 * phase);
      break;
    }
    case ActorKind::kWanderer: {
      const std::int64_t m = (frame - a.entry_frame) % (2 * a.period);
      x += a.velocity * static_cast<double>(m < a.period ? m : 2 * a.period - m);
      break;
    }
  }
  x = std::clamp(x, 0.0, params_.width - a.box_w);
  y = std::clamp(y, 0.0, params_.height - a.box_h);
  return edge::BoundingBox(x, y, x + a.box_w, y + a.box_h);
}

edge::DetectionScript Scenario::detections(const std::string& camera_id) const {
  camera_index(params_, camera_id);
  edge::DetectionScript script(static_cast<std::size_t>(params_.frames));
  for (std::int64_t f = 0; f < params_.frames; ++f) {
    for (const auto& a : actors_) {
      if (a.camera_id != camera_id) continue;
      if (auto box = box_at(a, f)) script[static_cast<std::size_t>(f)].push_back({*box, 1.0, f});
    }
  }
  return script;
}

std::optional<std::size_t> Scenario::actor_at(const std::string& camera_id, std::int64_t frame,
                                              const edge::BoundingBox& box) const {
  std::optional<std::size_t> best;
  double best_iou = 0.0;
  for (std::size_t i = 0; i < actors_.size(); ++i) {
    if (actors_[i].camera_id != camera_id) continue;
    auto truth = box_at(actors_[i], frame);
    if (!truth) continue;
    const double v = edge::iou(*truth, box);
    if (v > best_iou) {
      best_iou = v;
      best = i;
    }
  }
  return best;
}

std::string Scenario::describe() const {
  std::string out = fmt::format("seed={} frames={} rate={}\n", seed_, params_.frames,
                                wire::format_real(params_.frame_rate));
  for (const auto& a : actors_) {
    out += fmt::format("{} {} {} frames=[{},{}) at={},{} box={}x{} v={} amp={} period={}\n", a.id,
                       to_string(a.kind), a.camera_id, a.entry_frame, a.exit_frame,
                       wire::format_real(a.x0), wire::format_real(a.y0),
                       wire::format_real(a.box_w), wire::format_real(a.box_h),
                       wire::format_real(a.velocity), wire::format_real(a.amplitude), a.period);
  }
  return out;
}

Scenario generate_scenario(const ScenarioParams& p, std::uint64_t seed) {
  if (p.frames <= 0 || !(p.frame_rate > 0.0)) throw ConfigError("scenario needs frames and a rate");
  if (p.cameras.empty()) throw ConfigError("scenario needs a camera");
  for (const auto& cam : p.cameras) {
    if (!wire::is_valid_camera_id(cam)) throw ConfigError("bad camera id: " + cam);
  }
  if (p.walkers < 0 || p.loiterers < 0 || p.wanderers < 0) {
    throw ConfigError("actor counts must be non-negative");
  }
  const int slots = p.walkers + p.loiterers + p.wanderers;
  const double lane_h = slots > 0 ? p.height / slots : p.height;
  const double box_h = std::min(120.0, 0.7 * lane_h);
  const double box_w = 0.4 * box_h;
  if (box_h < 4.0 || p.width < 8.0 * box_w) throw ConfigError("frame too small for the actors");

  std::vector<ActorScript> actors;
  for (std::size_t c = 0; c < p.cameras.size(); ++c) {
    const std::string& cam = p.cameras[c];
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(c)};
    std::mt19937_64 rng(seq);
    auto uniform = [&](double lo, double hi) {
      return std::uniform_real_distribution<double>(lo, hi)(rng);
    };
    auto integer = [&](std::int64_t lo, std::int64_t hi) {
      return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
    };

    std::vector<ActorKind> kinds;
    kinds.insert(kinds.end(), p.walkers, ActorKind::kWalker);
    kinds.insert(kinds.end(), p.loiterers, ActorKind::kLoiterer);
    kinds.insert(kinds.end(), p.wanderers, ActorKind::kWanderer);
    std::vector<int> lanes(kinds.size());
    for (std::size_t i = 0; i < lanes.size(); ++i) lanes[i] = static_cast<int>(i);
    std::shuffle(lanes.begin(), lanes.end(), rng);

    std::map<ActorKind, int> counter;
    auto next_id = [&](ActorKind k) {
      return fmt::format("{}/{}-{}", cam, to_string(k), ++counter[k]);
    };

    for (std::size_t s = 0; s < kinds.size(); ++s) {
      ActorScript a;
      a.kind = kinds[s];
      a.camera_id = cam;
      a.box_w = box_w;
      a.box_h = box_h;
      a.y0 = lanes[s] * lane_h + (lane_h - box_h) / 2.0;
      a.entry_frame = integer(0, 9);

      if (a.kind == ActorKind::kWalker) {
        std::int64_t entry = a.entry_frame;
        while (entry < p.frames) {
          ActorScript w = a;
          w.id = next_id(ActorKind::kWalker);
          w.entry_frame = entry;
          const double speed = uniform(4.5, 8.0);
          const bool rightwards = integer(0, 1) == 1;
          w.velocity = rightwards ? speed : -speed;
          w.x0 = rightwards ? 0.0 : p.width - box_w;
          const auto steps = static_cast<std::int64_t>(std::floor((p.width - box_w) / speed));
          w.exit_frame = std::min(p.frames, entry + steps + 1);
          actors.push_back(w);
          if (!p.respawn) break;
          entry = w.exit_frame + integer(1, 5);
        }
        continue;
      }

      a.id = next_id(a.kind);
      a.exit_frame = p.frames;
      if (a.exit_frame <= a.entry_frame) continue;
      if (a.kind == ActorKind::kLoiterer) {
        a.amplitude = uniform(3.0, 6.0);
        a.period = integer(120, 200);
        a.x0 = uniform(0.1 * p.width, 0.9 * p.width - box_w);
      } else {
        const double speed = uniform(2.5, 3.5);
        a.period = integer(6, 12);
        a.velocity = integer(0, 1) == 1 ? speed : -speed;
        const double reach = speed * static_cast<double>(a.period);
        a.x0 = a.velocity > 0 ? uniform(0.1 * p.width, 0.9 * p.width - box_w - reach)
                              : uniform(0.1 * p.width + reach, 0.9 * p.width - box_w);
      }
      actors.push_back(a);
    }
  }
  return Scenario(seed, p, std::move(actors));
}

std::unique_ptr<edge::Detector> scenario_detector(const Scenario& scenario,
                                                  const std::string& camera_id,
                                                  const Config& cfg) {
  auto script = std::make_shared<const edge::DetectionScript>(scenario.detections(camera_id));
  edge::NoiseModel noise;
  noise.jitter_px = cfg.get_double("edge.jitter_px", 0.2);
  noise.dropout = cfg.get_double("edge.dropout", 0.0);
  noise.seed = scenario.seed() * 1000003u + camera_index(scenario.params(), camera_id);
  return edge::make_detector(cfg.get_string("edge.detector", "noisy"), std::move(script), noise);
}

}  // namespace lisps::sim
