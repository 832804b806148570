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

#ifndef LISPS_EDGE_GEOMETRY_HPP_
#define LISPS_EDGE_GEOMETRY_HPP_

#include <stdexcept>

namespace lisps::edge {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Axis-aligned pixel box. Construction enforces finite, non-negative
// coordinates with x_min < x_max and y_min < y_max.
class BoundingBox {
 public:
  BoundingBox(double x_min, double y_min, double x_max, double y_max);

  double x_min() const { return x_min_; }
  double y_min() const { return y_min_; }
  double x_max() const { return x_max_; }
  double y_max() const { return y_max_; }

  double width() const { return x_max_ - x_min_; }
  double height() const { return y_max_ - y_min_; }
  double area() const { return width() * height(); }
  Point centroid() const { return {(x_min_ + x_max_) / 2.0, (y_min_ + y_max_) / 2.0}; }

  static bool is_valid(double x_min, double y_min, double x_max, double y_max);

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;

 private:
  double x_min_;
  double y_min_;
  double x_max_;
  double y_max_;
};

// Intersection over union; 0 for disjoint or edge-touching boxes.
double iou(const BoundingBox& a, const BoundingBox& b);

}  // namespace lisps::edge

#endif  // LISPS_EDGE_GEOMETRY_HPP_
