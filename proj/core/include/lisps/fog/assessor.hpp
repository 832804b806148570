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

#ifndef LISPS_FOG_ASSESSOR_HPP_
#define LISPS_FOG_ASSESSOR_HPP_

#include <cstdint>
#include <string>
#include <string_view>

#include "lisps/common/config.hpp"
#include "lisps/common/time.hpp"
#include "lisps/edge/tracker.hpp"
#include "lisps/fog/fuzzy.hpp"

namespace lisps::fog {

enum class TimeClass { kDay, kEvening, kNight };
enum class LocationSensitivity { kPublic, kRestricted };
enum class BuildingSecurity { kLow, kMedium, kHigh };

struct Context {
  TimeClass time_class = TimeClass::kDay;
  LocationSensitivity location = LocationSensitivity::kPublic;
  BuildingSecurity security = BuildingSecurity::kLow;
  std::string camera_id;
};

TimeClass parse_time_class(std::string_view s);
LocationSensitivity parse_location(std::string_view s);
BuildingSecurity parse_security(std::string_view s);

// Day 06:00-18:00, evening 18:00-22:00, night otherwise (local time).
TimeClass classify_time(Timestamp t, int utc_offset_minutes);

// Multiplicative context factors; the neutral baseline is day/public/low.
struct FactorTable {
  double day = 1.0;
  double evening = 1.2;
  double night = 1.5;
  double public_area = 1.0;
  double restricted = 1.3;
  double low = 1.0;
  double medium = 1.25;
  double high = 1.5;

  // Product of the three factors clamped to [1, 2].
  double weight(const Context& ctx) const;

  // Reads [fog] factor.<name> overrides.
  static FactorTable from(const Config& cfg);
};

struct ContextualInputs {
  double speed = 0.0;
  double dir_change_rate = 0.0;  // changes per second
  double dwell = 0.0;
  double context_weight = 1.0;
};

ContextualInputs contextualize(const edge::FeatureRecord& rec, const Context& ctx,
                               const FactorTable& factors, double frame_period_s);

struct SuspicionScore {
  ObjectId object_id;
  std::string camera_id;
  std::int64_t frame_index = 0;
  double score = 0.0;
};

// Rules over speed, dir_change_rate, dwell and context_weight with a
// five-label suspicion output. Non-decreasing in dwell and in
// context_weight.
const std::string& default_rulebase_text();
RuleBase default_rulebase();

class SuspicionAssessor {
 public:
  // The rulebase must define inputs speed, dir_change_rate, dwell and
  // context_weight.
  SuspicionAssessor(RuleBase rulebase, FactorTable factors, double frame_period_s);

  double score(const ContextualInputs& in) const;
  SuspicionScore assess(const edge::FeatureRecord& rec, const Context& ctx,
                        std::int64_t frame_index) const;

  const RuleBase& rulebase() const { return rulebase_; }

 private:
  RuleBase rulebase_;
  FactorTable factors_;
  double frame_period_s_;
  std::size_t speed_;
  std::size_t rate_;
  std::size_t dwell_;
  std::size_t context_;
};

}  // namespace lisps::fog

#endif  // LISPS_FOG_ASSESSOR_HPP_
