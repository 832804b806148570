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

// gtest printers for frame types.

#ifndef LISPS_TESTS_PRINTERS_HPP_
#define LISPS_TESTS_PRINTERS_HPP_

#include <fmt/format.h>

#include <ostream>

#include "lisps/edge/tracker.hpp"

namespace lisps::edge {

inline void PrintTo(const FeatureRecord& r, std::ostream* os) {
  *os << fmt::format("{{id={} speed={:.17g} dirch={} dwell={:.17g} bbox={:.17g},{:.17g},{:.17g},{:.17g}}}",
                     r.object_id.ms, r.speed, r.direction_changes, r.dwell, r.bbox.x_min(),
                     r.bbox.y_min(), r.bbox.x_max(), r.bbox.y_max());
}

inline void PrintTo(const FrameFeatureSet& f, std::ostream* os) {
  *os << "frame " << f.frame_index << " cam " << f.camera_id << " ts " << f.timestamp.ms;
  for (const auto& [id, r] : f.objects) {
    *os << "\n  ";
    PrintTo(r, os);
  }
}

}  // namespace lisps::edge

#endif  // LISPS_TESTS_PRINTERS_HPP_
