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


#include "lisps/sim/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include "lisps/wire/codec.hpp"

namespace lisps::sim {

std::string format_edge_event(const edge::FrameEvent& e) {
  return fmt::format(
      "FRAME cam={} frame={} ts={} capture={} published={} missed={} objects={} bytes={}\n",
      e.camera_id, e.frame_index, format_seconds(e.frame_time), format_seconds(e.capture),
      format_seconds(e.published), e.missed_deadline ? 1 : 0, e.objects, e.bytes);
}

std::string format_fog_event(const fog::FrameReport& r) {
  std::string out = fmt::format(
      "FRAME cam={} frame={} ts={} recv={} done={} proc_us={} objects={} alerts={}\n",
      r.camera_id, r.frame_index, format_seconds(r.frame_time), format_seconds(r.received),
      format_seconds(r.decided), r.processing_us, r.scores.size(), r.alerts.size());
  for (const auto& a : r.alerts) {
    out += fmt::format("ALERT cam={} frame={} obj={} score={} done={}\n", a.camera_id,
                       a.frame_index, format_seconds(a.object_id), wire::format_real(a.score),
                       format_seconds(r.decided));
  }
  return out;
}

const std::string& EventLine::at(const std::string& key) const {
  auto it = fields.find(key);
  if (it == fields.end()) throw std::invalid_argument(kind + " event without " + key);
  return it->second;
}

std::int64_t EventLine::integer(const std::string& key) const {
  const std::string& v = at(key);
  std::size_t used = 0;
  const long long n = std::stoll(v, &used);
  if (used != v.size()) throw std::invalid_argument("bad integer " + key + "=" + v);
  return n;
}

Timestamp EventLine::time(const std::string& key) const {
  Timestamp t;
  if (!parse_seconds(at(key), &t)) throw std::invalid_argument("bad time " + key + "=" + at(key));
  return t;
}

EventLine parse_event(std::string_view line) {
  EventLine ev;
  std::size_t pos = 0;
  bool first = true;
  while (pos < line.size()) {
    const std::size_t end = std::min(line.find(' ', pos), line.size());
    const std::string_view tok = line.substr(pos, end - pos);
    pos = end + 1;
    if (tok.empty()) continue;
    if (first) {
      ev.kind = std::string(tok);
      first = false;
      continue;
    }
    const auto eq = tok.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw std::invalid_argument("bad event field: " + std::string(tok));
    }
    ev.fields[std::string(tok.substr(0, eq))] = std::string(tok.substr(eq + 1));
  }
  if (ev.kind.empty()) throw std::invalid_argument("empty event line");
  return ev;
}

std::vector<EventLine> read_events(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<EventLine> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    if (nl == std::string::npos) break;
    const std::string_view line(text.data() + pos, nl - pos);
    pos = nl + 1;
    if (!line.empty()) out.push_back(parse_event(line));
  }
  return out;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double rank = std::clamp(q, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (values[hi] - values[lo]) * (rank - static_cast<double>(lo));
}

Metrics compute_metrics(const std::vector<EventLine>& edge_events,
                        const std::vector<EventLine>& fog_events, const Scenario* scenario,
                        const std::map<TrackKey, std::size_t>* track_actor) {
  Metrics m;
  std::map<std::pair<std::string, std::int64_t>, Timestamp> capture;
  std::map<std::string, std::pair<Timestamp, Timestamp>> span;
  for (const auto& e : edge_events) {
    if (e.kind != "FRAME") continue;
    const std::string& cam = e.at("cam");
    const Timestamp t = e.time("capture");
    capture[{cam, e.integer("frame")}] = t;
    CameraMetrics& c = m.cameras[cam];
    auto [it, fresh] = span.try_emplace(cam, t, t);
    it->second.first = std::min(it->second.first, t);
    it->second.second = std::max(it->second.second, t);
    ++c.edge_frames;
    c.missed_deadlines += e.integer("missed");
  }
  for (auto& [cam, c] : m.cameras) {
    const auto& [first, last] = span[cam];
    if (c.edge_frames > 1 && last.ms > first.ms) {
      c.edge_fps = (c.edge_frames - 1) * 1000.0 / static_cast<double>(last.ms - first.ms);
    }
  }

  std::set<std::pair<std::string, std::int64_t>> seen;
  std::vector<bool> alerted;
  if (scenario != nullptr) alerted.assign(scenario->actors().size(), false);
  for (const auto& e : fog_events) {
    const std::string& cam = e.at("cam");
    const std::int64_t frame = e.integer("frame");
    const auto cap = capture.find({cam, frame});
    if (e.kind == "FRAME") {
      if (seen.insert({cam, frame}).second) ++m.cameras[cam].fog_frames;
      m.fog_frame_ms.push_back(static_cast<double>(e.integer("proc_us")) / 1000.0);
      if (cap != capture.end()) {
        m.decision_ms.push_back(static_cast<double>(e.time("done").ms - cap->second.ms));
      }
    } else if (e.kind == "ALERT") {
      ++m.alerts;
      if (cap != capture.end()) {
        m.alert_latency_ms.push_back(static_cast<double>(e.time("done").ms - cap->second.ms));
      }
      if (track_actor != nullptr && scenario != nullptr) {
        auto it = track_actor->find({cam, e.time("obj")});
        if (it != track_actor->end()) alerted[it->second] = true;
      }
    }
  }
  for (const auto& [key, t] : capture) {
    if (seen.count(key) == 0) ++m.cameras[key.first].frames_missing;
  }
  if (scenario != nullptr && track_actor != nullptr) m.confusion = confusion(*scenario, alerted);
  return m;
}

std::string Metrics::format() const {
  std::string out;
  auto real = [&](const std::string& name, double v) {
    out += fmt::format("{} {}\n", name, wire::format_real(v));
  };
  auto count = [&](const std::string& name, std::int64_t v) {
    out += fmt::format("{} {}\n", name, v);
  };
  for (const auto& [cam, c] : cameras) {
    count("edge." + cam + ".frames", c.edge_frames);
    real("edge." + cam + ".fps", c.edge_fps);
    count("edge." + cam + ".missed_deadlines", c.missed_deadlines);
    count("fog." + cam + ".frames", c.fog_frames);
    count("fog." + cam + ".frames_missing", c.frames_missing);
  }
  real("fog.frame_ms.median", percentile(fog_frame_ms, 0.5));
  real("fog.frame_ms.p95", percentile(fog_frame_ms, 0.95));
  real("decision_latency_ms.median", percentile(decision_ms, 0.5));
  real("decision_latency_ms.p95", percentile(decision_ms, 0.95));
  count("alerts", static_cast<std::int64_t>(alerts));
  count("alert_latency.samples", static_cast<std::int64_t>(alert_latency_ms.size()));
  real("alert_latency_ms.median", percentile(alert_latency_ms, 0.5));
  real("alert_latency_ms.p95", percentile(alert_latency_ms, 0.95));
  real("alert_latency_ms.max", percentile(alert_latency_ms, 1.0));
  if (confusion) {
    count("confusion.tp", static_cast<std::int64_t>(confusion->tp));
    count("confusion.fp", static_cast<std::int64_t>(confusion->fp));
    count("confusion.fn", static_cast<std::int64_t>(confusion->fn));
    count("confusion.tn", static_cast<std::int64_t>(confusion->tn));
  }
  return out;
}

}  // namespace lisps::sim
