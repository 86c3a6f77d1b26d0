// Copyright 2026 The actdet Authors
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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace actdet {

/// Axis-aligned spatio-temporal box: an image rectangle in continuous pixel
/// coordinates swept over an inclusive range of frames.
struct Cuboid {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;
  int f_start = 0;
  int f_end = 0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  /// Inclusive frame count.
  int num_frames() const { return f_end - f_start + 1; }
  /// Continuous mid-frame, may be a half-integer.
  double mid_frame() const { return 0.5 * (static_cast<double>(f_start) + f_end); }
  /// Half of the inclusive frame count; never below 0.5 for a valid cuboid.
  double half_length() const { return 0.5 * num_frames(); }

  /// Finite coordinates, positive width and height, f_start <= f_end.
  bool valid() const;

  friend bool operator==(const Cuboid&, const Cuboid&) = default;
};

/// Lexicographic over (f_start, f_end, x_min, y_min, x_max, y_max).
bool canonical_less(const Cuboid& a, const Cuboid& b);

double spatial_iou(const Cuboid& a, const Cuboid& b);
double temporal_iou(const Cuboid& a, const Cuboid& b);
/// Volume ratio with volume = rectangle area x inclusive frame count.
double iou_3d(const Cuboid& a, const Cuboid& b);

/// Grows the shorter side symmetrically about the centre until the rectangle
/// is square. Frames are untouched and the result is not clamped to the image.
Cuboid square_pad(const Cuboid& c);

/// Component-wise envelope. Throws std::invalid_argument on an empty list.
Cuboid bounding_cuboid(std::span<const Cuboid> items);

/// Column-major copy of a set of cuboids for the batched overlap kernels.
class CuboidColumns {
 public:
  CuboidColumns() = default;
  explicit CuboidColumns(std::span<const Cuboid> items);

  void push_back(const Cuboid& c);
  std::size_t size() const { return x_min_.size(); }
  bool empty() const { return x_min_.empty(); }

  /// out[k] = overlap(query, item k); `out` must hold size() values.
  void spatial_iou(const Cuboid& query, std::span<double> out) const;
  void temporal_iou(const Cuboid& query, std::span<double> out) const;
  void iou_3d(const Cuboid& query, std::span<double> out) const;

 private:
  std::vector<double> x_min_, y_min_, x_max_, y_max_, f_start_, f_end_;
};

}  // namespace actdet
