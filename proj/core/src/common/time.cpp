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

#include "lisps/common/time.hpp"

#include <fmt/format.h>

#include <charconv>
#include <chrono>
#include <ctime>
#include <stdexcept>

namespace lisps {

namespace {

// Days since 1970-01-01 to civil date (proleptic Gregorian).
void civil_from_days(std::int64_t z, int* y, unsigned* m, unsigned* d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  *d = doy - (153 * mp + 2) / 5 + 1;
  *m = mp < 10 ? mp + 3 : mp - 9;
  *y = static_cast<int>(yy + (*m <= 2));
}

std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

std::string format_seconds(Timestamp t) {
  const bool neg = t.ms < 0;
  const std::uint64_t mag = neg ? static_cast<std::uint64_t>(-(t.ms + 1)) + 1
                                : static_cast<std::uint64_t>(t.ms);
  return fmt::format("{}{}.{:03d}", neg ? "-" : "", mag / 1000,
                     static_cast<int>(mag % 1000));
}

bool parse_seconds(std::string_view text, Timestamp* out) {
  bool neg = false;
  if (!text.empty() && text.front() == '-') {
    neg = true;
    text.remove_prefix(1);
  }
  const auto dot = text.find('.');
  if (dot == std::string_view::npos) return false;
  const auto whole = text.substr(0, dot);
  const auto frac = text.substr(dot + 1);
  if (!all_digits(whole) || frac.size() != 3 || !all_digits(frac)) return false;
  // Canonical: no leading zeros except a lone "0".
  if (whole.size() > 1 && whole.front() == '0') return false;
  std::int64_t w = 0;
  auto [p, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), w);
  if (ec != std::errc() || p != whole.data() + whole.size()) return false;
  if (w > (INT64_MAX - 999) / 1000) return false;
  const std::int64_t f = (frac[0] - '0') * 100 + (frac[1] - '0') * 10 + (frac[2] - '0');
  std::int64_t ms = w * 1000 + f;
  if (neg) {
    if (ms == 0) return false;  // "-0.000" is not canonical
    ms = -ms;
  }
  out->ms = ms;
  return true;
}

std::string format_iso8601(Timestamp t) {
  const std::int64_t days = floor_div(t.ms, 86400000);
  const std::int64_t rem = t.ms - days * 86400000;
  int y;
  unsigned m, d;
  civil_from_days(days, &y, &m, &d);
  const auto secs = rem / 1000;
  return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}.{:03d}Z", y, m, d,
                     static_cast<int>(secs / 3600), static_cast<int>(secs / 60 % 60),
                     static_cast<int>(secs % 60), static_cast<int>(rem % 1000));
}

Timestamp parse_iso8601(std::string_view text) {
  // YYYY-MM-DDTHH:MM:SS[.mmm]Z
  auto bad = [&]() {
    return std::invalid_argument("invalid ISO-8601 timestamp: " + std::string(text));
  };
  if (text.size() < 20 || text.back() != 'Z') throw bad();
  auto num = [&](std::size_t pos, std::size_t len) {
    const auto s = text.substr(pos, len);
    if (!all_digits(s)) throw bad();
    int v = 0;
    std::from_chars(s.data(), s.data() + s.size(), v);
    return v;
  };
  if (text[4] != '-' || text[7] != '-' || text[10] != 'T' || text[13] != ':' ||
      text[16] != ':')
    throw bad();
  const int y = num(0, 4), mo = num(5, 2), d = num(8, 2);
  const int h = num(11, 2), mi = num(14, 2), s = num(17, 2);
  int ms = 0;
  if (text.size() == 24) {
    if (text[19] != '.') throw bad();
    ms = num(20, 3);
  } else if (text.size() != 20) {
    throw bad();
  }
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || s > 59) throw bad();
  const std::int64_t days = days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d));
  return Timestamp{((days * 24 + h) * 60 + mi) * 60000 + s * 1000LL + ms};
}

std::string local_date_stamp(Timestamp t, int utc_offset_minutes) {
  const std::int64_t shifted = t.ms + static_cast<std::int64_t>(utc_offset_minutes) * 60000;
  int y;
  unsigned m, d;
  civil_from_days(floor_div(shifted, 86400000), &y, &m, &d);
  return fmt::format("{:04d}{:02d}{:02d}", y, m, d);
}

int system_utc_offset_minutes() {
  const std::time_t now = std::time(nullptr);
  std::tm local{};
  localtime_r(&now, &local);
  return static_cast<int>(local.tm_gmtoff / 60);
}

Timestamp SystemClock::now() const {
  const auto d = std::chrono::system_clock::now().time_since_epoch();
  return Timestamp{std::chrono::duration_cast<std::chrono::milliseconds>(d).count()};
}

}  // namespace lisps
