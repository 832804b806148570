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

#ifndef LISPS_COMMON_TIME_HPP_
#define LISPS_COMMON_TIME_HPP_

#include <atomic>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace lisps {

// Seconds with millisecond resolution, stored as an exact integer count of
// milliseconds. Every timestamp that crosses the wire is rendered with three
// decimals, so this is the natural canonical representation.
struct Timestamp {
  std::int64_t ms = 0;

  static constexpr Timestamp from_ms(std::int64_t v) { return Timestamp{v}; }
  constexpr double seconds() const { return static_cast<double>(ms) / 1000.0; }

  friend constexpr auto operator<=>(const Timestamp&, const Timestamp&) = default;
};

// Object ids are the timestamp of the object's first detection.
using ObjectId = Timestamp;

// "<sec>.<ms>" with exactly three decimals, e.g. 90.200 or -1.005.
std::string format_seconds(Timestamp t);

// Inverse of format_seconds. Accepts only the canonical form; returns false
// on anything else.
bool parse_seconds(std::string_view text, Timestamp* out);

// UTC ISO-8601 with millisecond precision: 2026-01-01T12:00:00.200Z.
std::string format_iso8601(Timestamp t);

// Parses "YYYY-MM-DDTHH:MM:SS[.mmm]Z". Throws std::invalid_argument.
Timestamp parse_iso8601(std::string_view text);

// Calendar date (YYYYMMDD) of `t` shifted by `utc_offset_minutes`.
std::string local_date_stamp(Timestamp t, int utc_offset_minutes);

// Offset of the process' local time zone from UTC, in minutes.
int system_utc_offset_minutes();

class Clock {
 public:
  virtual ~Clock() = default;
  virtual Timestamp now() const = 0;
};

class SystemClock final : public Clock {
 public:
  Timestamp now() const override;
};

// Logical clock for tests and deterministic replays.
class ManualClock final : public Clock {
 public:
  explicit ManualClock(Timestamp start = {}) : ms_(start.ms) {}

  Timestamp now() const override { return Timestamp{ms_.load()}; }
  void set(Timestamp t) { ms_.store(t.ms); }
  void advance_ms(std::int64_t delta) { ms_.fetch_add(delta); }

 private:
  std::atomic<std::int64_t> ms_;
};

}  // namespace lisps

#endif  // LISPS_COMMON_TIME_HPP_
