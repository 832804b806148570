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


#include "lisps/sim/replay.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "lisps/edge/pipeline.hpp"
#include "lisps/wire/codec.hpp"

namespace lisps::sim {

namespace {

std::string per_camera(const Config& cfg, const std::string& key, const std::string& camera_id,
                       const std::string& fallback) {
  return cfg.get_string(key + "." + camera_id, cfg.get_string(key, fallback));
}

std::unique_ptr<edge::EdgePipeline> scenario_pipeline(const Scenario& scenario,
                                                      const std::string& camera_id,
                                                      const Config& cfg) {
  return std::make_unique<edge::EdgePipeline>(camera_id, edge::edge_config_from(cfg),
                                              scenario_detector(scenario, camera_id, cfg),
                                              scenario.params().epoch);
}

}  // namespace

DecisionSettings DecisionSettings::from(const Config& cfg) {
  DecisionSettings s;
  s.threshold = cfg.get_double("fog.threshold", s.threshold);
  s.cooldown_ms = std::llround(cfg.get_double("fog.cooldown_s", s.cooldown_ms / 1000.0) * 1000.0);
  s.utc_offset_minutes = static_cast<int>(cfg.get_int("fog.utc_offset_minutes", 0));
  s.receiver = cfg.get_string("fog.receiver", s.receiver);
  return s;
}

std::shared_ptr<const fog::SuspicionAssessor> assessor_from(const Config& cfg) {
  fog::RuleBase rb = fog::default_rulebase();
  if (auto path = cfg.get("fog.rulebase"); path && !path->empty()) {
    std::ifstream in(*path);
    if (!in) throw ConfigError("cannot read rulebase " + *path);
    std::stringstream text;
    text << in.rdbuf();
    rb = fog::RuleBase::parse(text.str());
  }
  const double rate = cfg.get_double("edge.frame_rate", 5.0);
  if (!(rate > 0.0)) throw ConfigError("edge.frame_rate must be > 0");
  return std::make_shared<const fog::SuspicionAssessor>(std::move(rb), fog::FactorTable::from(cfg),
                                                        1.0 / rate);
}

fog::CameraFeed feed_from(const Config& cfg, const std::string& camera_id, Endpoint edge) {
  fog::CameraFeed feed;
  feed.camera_id = camera_id;
  feed.edge = std::move(edge);
  feed.context.camera_id = camera_id;
  try {
    const std::string time_class = per_camera(cfg, "fog.time_class", camera_id, "auto");
    feed.auto_time_class = time_class == "auto";
    if (!feed.auto_time_class) feed.context.time_class = fog::parse_time_class(time_class);
    feed.context.location =
        fog::parse_location(per_camera(cfg, "fog.location", camera_id, "public"));
    feed.context.security = fog::parse_security(per_camera(cfg, "fog.security", camera_id, "low"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return feed;
}

Confusion confusion(const Scenario& scenario, const std::vector<bool>& alerted) {
  Confusion c;
  const auto& actors = scenario.actors();
  for (std::size_t i = 0; i < actors.size(); ++i) {
    const bool predicted = i < alerted.size() && alerted[i];
    if (actors[i].suspicious()) {
      ++(predicted ? c.tp : c.fn);
    } else {
      ++(predicted ? c.fp : c.tn);
    }
  }
  return c;
}

std::map<TrackKey, std::size_t> attribute_tracks(const Scenario& scenario,
                                                 const std::string& camera_id,
                                                 const Config& cfg) {
  std::map<TrackKey, std::size_t> out;
  auto pipeline = scenario_pipeline(scenario, camera_id, cfg);
  for (std::int64_t f = 0; f < scenario.params().frames; ++f) {
    const edge::FrameResult r = pipeline->step(f);
    for (const auto& [id, det] : r.new_tracks) {
      const auto& rec = r.features.objects.at(id);
      if (auto actor = scenario.actor_at(camera_id, f, rec.bbox)) out[{camera_id, id}] = *actor;
    }
  }
  return out;
}

ReplayResult replay_scenario(const Scenario& scenario, const Config& cfg) {
  ReplayResult out;
  const auto assessor = assessor_from(cfg);
  const DecisionSettings settings = DecisionSettings::from(cfg);
  fog::AlertDispatcher dispatcher(settings.threshold, settings.cooldown_ms);
  auto sink = std::make_shared<fog::MemoryAlertSink>();
  dispatcher.set_receiver("*", settings.receiver, sink);

  out.actor_peak.assign(scenario.actors().size(), 0.0);
  out.actor_alerted.assign(scenario.actors().size(), false);
  out.frames = scenario.params().frames;

  for (const auto& cam : scenario.params().cameras) {
    const fog::CameraFeed feed = feed_from(cfg, cam);
    auto pipeline = scenario_pipeline(scenario, cam, cfg);
    wire::FrameAssembler assembler;
    for (std::int64_t f = 0; f < scenario.params().frames; ++f) {
      const edge::FrameResult r = pipeline->step(f);
      for (const auto& [id, det] : r.new_tracks) {
        const auto& rec = r.features.objects.at(id);
        if (auto actor = scenario.actor_at(cam, f, rec.bbox)) out.track_actor[{cam, id}] = *actor;
      }
      auto blocks = assembler.feed(wire::encode_frame(r.features));
      if (blocks.size() != 1) throw std::logic_error("replay: frame did not reassemble");
      const edge::FrameFeatureSet& frame = blocks.front().frame;
      const fog::FrameDecision d = fog::decide_frame(
          *assessor, dispatcher,
          fog::frame_context(feed, frame.timestamp, settings.utc_offset_minutes), frame);
      for (const auto& s : d.scores) {
        double& peak = out.peak_score[{cam, s.object_id}];
        peak = std::max(peak, s.score);
      }
    }
  }

  out.alerts = sink->alerts();
  for (const auto& [key, peak] : out.peak_score) {
    auto it = out.track_actor.find(key);
    if (it == out.track_actor.end()) continue;
    out.actor_peak[it->second] = std::max(out.actor_peak[it->second], peak);
  }
  for (const auto& a : out.alerts) {
    auto it = out.track_actor.find({a.camera_id, a.object_id});
    if (it != out.track_actor.end()) out.actor_alerted[it->second] = true;
  }
  out.confusion = confusion(scenario, out.actor_alerted);
  return out;
}

}  // namespace lisps::sim
