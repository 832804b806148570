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

#include "lisps/wire/codec.hpp"

#include <fmt/format.h>

#include <charconv>
#include <optional>

namespace lisps::wire {

namespace {

constexpr std::string_view kFrame = "FRAME ";
constexpr std::string_view kCam = "CAM ";
constexpr std::string_view kTs = "TS ";
constexpr std::string_view kObj = "OBJ ";
constexpr std::string_view kEnd = "END ";

bool starts_with(std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; }

std::optional<std::int64_t> parse_index(std::string_view s) {
  if (s.empty() || (s.size() > 1 && s.front() == '0')) return std::nullopt;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
  }
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<double> parse_real(std::string_view s) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, std::chars_format::fixed);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  if (format_real(v) != s) return std::nullopt;  // canonical form only
  return v;
}

std::string_view take_field(std::string_view* rest, char sep) {
  const auto pos = rest->find(sep);
  std::string_view head = rest->substr(0, pos);
  *rest = pos == std::string_view::npos ? std::string_view{} : rest->substr(pos + 1);
  return head;
}

FeatureRecord parse_object(std::string_view line) {
  auto fail = [](const std::string& why) { return std::invalid_argument(why); };
  if (!starts_with(line, kObj)) throw fail("expected OBJ line");
  if (line.back() == ' ') throw fail("trailing space");
  std::string_view rest = line.substr(kObj.size());

  FeatureRecord rec;
  if (!parse_seconds(take_field(&rest, ' '), &rec.object_id)) throw fail("bad object id");

  auto keyed = [&](std::string_view key) {
    std::string_view f = take_field(&rest, ' ');
    if (!starts_with(f, key)) throw fail("expected " + std::string(key));
    return f.substr(key.size());
  };
  auto speed = parse_real(keyed("SPEED="));
  if (!speed || *speed < 0.0) throw fail("bad SPEED");
  rec.speed = *speed;
  auto dirch = parse_index(keyed("DIRCH="));
  if (!dirch || *dirch > INT32_MAX) throw fail("bad DIRCH");
  rec.direction_changes = static_cast<int>(*dirch);
  auto dwell = parse_real(keyed("DWELL="));
  if (!dwell || *dwell < 0.0) throw fail("bad DWELL");
  rec.dwell = *dwell;

  std::string_view box = keyed("BBOX=");
  if (!rest.empty()) throw fail("trailing data after BBOX");
  double c[4];
  for (int i = 0; i < 4; ++i) {
    auto v = parse_real(take_field(&box, i < 3 ? ',' : '\0'));
    if (!v) throw fail("bad BBOX coordinate");
    c[i] = *v;
  }
  if (!box.empty()) throw fail("trailing data in BBOX");
  if (!edge::BoundingBox::is_valid(c[0], c[1], c[2], c[3])) throw fail("invalid BBOX");
  rec.bbox = edge::BoundingBox(c[0], c[1], c[2], c[3]);
  return rec;
}

}  // namespace

bool is_valid_camera_id(std::string_view id) {
  if (id.empty()) return false;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '.' || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

std::string format_real(double v) {
  std::string s = fmt::format("{:.3f}", v);
  if (s == "-0.000") s = "0.000";
  return s;
}

std::string encode_object_line(const FeatureRecord& r) {
  return fmt::format("OBJ {} SPEED={} DIRCH={} DWELL={} BBOX={},{},{},{}",
                     format_seconds(r.object_id), format_real(r.speed), r.direction_changes,
                     format_real(r.dwell), format_real(r.bbox.x_min()), format_real(r.bbox.y_min()),
                     format_real(r.bbox.x_max()), format_real(r.bbox.y_max()));
}

FeatureRecord decode_object_line(std::string_view line) { return parse_object(line); }

std::string encode_frame(const FrameFeatureSet& f) {
  if (!is_valid_camera_id(f.camera_id)) {
    throw std::invalid_argument("encode_frame: invalid camera id '" + f.camera_id + "'");
  }
  std::string out;
  out.reserve(64 + f.objects.size() * 96);
  out += fmt::format("FRAME {}\nCAM {}\nTS {}\n", f.frame_index, f.camera_id,
                     format_seconds(f.timestamp));
  for (const auto& [id, rec] : f.objects) {
    out += encode_object_line(rec);
    out += '\n';
  }
  out += fmt::format("END {}\n", f.frame_index);
  return out;
}

DecodeResult decode_frame(std::string_view buffer) {
  // Collect complete lines up to and including the first END line.
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  bool terminated = false;
  while (pos < buffer.size()) {
    const auto lf = buffer.find('\n', pos);
    if (lf == std::string_view::npos) break;
    std::string_view line = buffer.substr(pos, lf - pos);
    lines.push_back(line);
    pos = lf + 1;
    if (lines.size() > 1 && starts_with(line, "END")) {
      terminated = true;
      break;
    }
  }
  if (!terminated) {
    // A first line that can never open a block is an error now rather than
    // an indefinite wait.
    const std::string_view head = lines.empty() ? buffer : lines.front();
    const std::size_t n = std::min(head.size(), kFrame.size());
    if (head.substr(0, n) != kFrame.substr(0, n)) throw DecodeError(1, "expected FRAME");
    return Incomplete{};
  }

  Complete out;
  out.consumed = pos;
  FrameFeatureSet& f = out.frame;

  if (!starts_with(lines[0], kFrame)) throw DecodeError(1, "expected FRAME");
  auto idx = parse_index(lines[0].substr(kFrame.size()));
  if (!idx) throw DecodeError(1, "bad frame index");
  f.frame_index = *idx;

  const std::size_t end_line = lines.size();
  if (end_line < 4) throw DecodeError(end_line, "block too short");
  if (!starts_with(lines[1], kCam) || !is_valid_camera_id(lines[1].substr(kCam.size()))) {
    throw DecodeError(2, "expected CAM <id>");
  }
  f.camera_id = std::string(lines[1].substr(kCam.size()));
  if (!starts_with(lines[2], kTs) || !parse_seconds(lines[2].substr(kTs.size()), &f.timestamp)) {
    throw DecodeError(3, "expected TS <seconds>");
  }

  for (std::size_t i = 3; i + 1 < end_line; ++i) {
    FeatureRecord rec;
    try {
      rec = parse_object(lines[i]);
    } catch (const std::invalid_argument& e) {
      throw DecodeError(i + 1, e.what());
    }
    if (!f.objects.empty() && !(f.objects.rbegin()->first < rec.object_id)) {
      throw DecodeError(i + 1, "object ids not strictly ascending");
    }
    f.objects.emplace(rec.object_id, rec);
  }

  const std::string_view last = lines.back();
  if (!starts_with(last, kEnd)) throw DecodeError(end_line, "expected END <index>");
  auto end_idx = parse_index(last.substr(kEnd.size()));
  if (!end_idx) throw DecodeError(end_line, "bad END index");
  if (*end_idx != f.frame_index) {
    throw FramingError(end_line, "FRAME " + std::to_string(f.frame_index) + " closed by END " +
                                     std::to_string(*end_idx));
  }
  return out;
}

std::vector<FrameAssembler::Block> FrameAssembler::feed(std::string_view bytes) {
  buffer_.append(bytes);
  std::vector<Block> out;
  if (bytes.find('\n') == std::string_view::npos && buffer_.size() <= max_buffer_) {
    // A block only completes on an LF, but a bad first line is reported
    // as soon as it is visible.
    decode_frame(buffer_);
    return out;
  }
  std::size_t offset = 0;
  while (offset < buffer_.size()) {
    DecodeResult r = decode_frame(std::string_view(buffer_).substr(offset));
    auto* done = std::get_if<Complete>(&r);
    if (done == nullptr) break;
    out.push_back({std::move(done->frame), buffer_.substr(offset, done->consumed)});
    offset += done->consumed;
  }
  buffer_.erase(0, offset);
  if (buffer_.size() > max_buffer_) throw DecodeError(1, "unterminated block exceeds buffer limit");
  return out;
}

}  // namespace lisps::wire
