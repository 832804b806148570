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

#include "lisps/fog/assessor.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace lisps::fog {

TimeClass parse_time_class(std::string_view s) {
  if (s == "day") return TimeClass::kDay;
  if (s == "evening") return TimeClass::kEvening;
  if (s == "night") return TimeClass::kNight;
  throw std::invalid_argument("unknown time class: " + std::string(s));
}

LocationSensitivity parse_location(std::string_view s) {
  if (s == "public") return LocationSensitivity::kPublic;
  if (s == "restricted") return LocationSensitivity::kRestricted;
  throw std::invalid_argument("unknown location sensitivity: " + std::string(s));
}

BuildingSecurity parse_security(std::string_view s) {
  if (s == "low") return BuildingSecurity::kLow;
  if (s == "medium") return BuildingSecurity::kMedium;
  if (s == "high") return BuildingSecurity::kHigh;
  throw std::invalid_argument("unknown building security: " + std::string(s));
}

TimeClass classify_time(Timestamp t, int utc_offset_minutes) {
  std::int64_t local = t.ms + static_cast<std::int64_t>(utc_offset_minutes) * 60000;
  local %= 86400000;
  if (local < 0) local += 86400000;
  const auto hour = local / 3600000;
  if (hour >= 6 && hour < 18) return TimeClass::kDay;
  if (hour >= 18 && hour < 22) return TimeClass::kEvening;
  return TimeClass::kNight;
}

double FactorTable::weight(const Context& ctx) const {
  double w_time = day;
  if (ctx.time_class == TimeClass::kEvening) w_time = evening;
  if (ctx.time_class == TimeClass::kNight) w_time = night;
  const double w_loc = ctx.location == LocationSensitivity::kRestricted ? restricted : public_area;
  double w_sec = low;
  if (ctx.security == BuildingSecurity::kMedium) w_sec = medium;
  if (ctx.security == BuildingSecurity::kHigh) w_sec = high;
  return std::clamp(w_time * w_loc * w_sec, 1.0, 2.0);
}

FactorTable FactorTable::from(const Config& cfg) {
  FactorTable t;
  t.day = cfg.get_double("fog.factor.day", t.day);
  t.evening = cfg.get_double("fog.factor.evening", t.evening);
  t.night = cfg.get_double("fog.factor.night", t.night);
  t.public_area = cfg.get_double("fog.factor.public", t.public_area);
  t.restricted = cfg.get_double("fog.factor.restricted", t.restricted);
  t.low = cfg.get_double("fog.factor.low", t.low);
  t.medium = cfg.get_double("fog.factor.medium", t.medium);
  t.high = cfg.get_double("fog.factor.high", t.high);
  return t;
}

ContextualInputs contextualize(const edge::FeatureRecord& rec, const Context& ctx,
                               const FactorTable& factors, double frame_period_s) {
  ContextualInputs in;
  in.speed = rec.speed;
  in.dwell = rec.dwell;
  in.dir_change_rate = rec.direction_changes / std::max(rec.dwell, frame_period_s);
  in.context_weight = factors.weight(ctx);
  return in;
}

const std::string& default_rulebase_text() {
  // Each rule only conjoins inputs its consequent depends on: a conjunct
  // whose label does not change the consequent caps the firing strength at
  // the partition's max degree, which dips between apexes and would make
  // the score non-monotone in the other inputs.
  static const std::string text = R"(# speed in px/frame, dir_change_rate in 1/s, dwell in s
input speed slow:0 moderate:2 fast:5
input dir_change_rate low:0 high:1
input dwell short:0 long:20
input context_weight normal:1 elevated:2
output suspicion none:0 low:0.25 medium:0.5 high:0.75 critical:1

rule speed=fast -> none 1
rule speed=moderate -> low 1
rule speed=slow & dwell=short -> low 1
rule speed=slow & dwell=long -> high 1
rule dir_change_rate=high -> medium 0.6
rule context_weight=elevated -> critical 0.5
)";
  return text;
}

RuleBase default_rulebase() { return RuleBase::parse(default_rulebase_text()); }

SuspicionAssessor::SuspicionAssessor(RuleBase rulebase, FactorTable factors, double frame_period_s)
    : rulebase_(std::move(rulebase)),
      factors_(factors),
      frame_period_s_(frame_period_s),
      speed_(rulebase_.input_index("speed")),
      rate_(rulebase_.input_index("dir_change_rate")),
      dwell_(rulebase_.input_index("dwell")),
      context_(rulebase_.input_index("context_weight")) {
  if (!(frame_period_s_ > 0.0)) throw std::invalid_argument("frame period must be > 0");
}

double SuspicionAssessor::score(const ContextualInputs& in) const {
  const auto& vars = rulebase_.inputs();
  std::vector<std::vector<double>> degrees(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) {
    double x = vars[i].lo();
    if (i == speed_) x = in.speed;
    if (i == rate_) x = in.dir_change_rate;
    if (i == dwell_) x = in.dwell;
    if (i == context_) x = in.context_weight;
    degrees[i] = vars[i].fuzzify(x);
  }
  return std::clamp(defuzzify_centroid(infer(rulebase_, degrees)), 0.0, 1.0);
}

SuspicionScore SuspicionAssessor::assess(const edge::FeatureRecord& rec, const Context& ctx,
                                         std::int64_t frame_index) const {
  const ContextualInputs in = contextualize(rec, ctx, factors_, frame_period_s_);
  return SuspicionScore{rec.object_id, ctx.camera_id, frame_index, score(in)};
}

}  // namespace lisps::fog
