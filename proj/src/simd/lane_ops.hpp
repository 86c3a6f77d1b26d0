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

// Per-element reference operations. Vector variants use these for loop tails
// so that every lane, vectorised or not, follows the same arithmetic.
// Internal linkage: each translation unit gets its own copy compiled with its
// own target flags.

#include <cmath>

#include "actdet/simd/kernels.hpp"

namespace actdet::simd {
namespace {

// Same selection rule as the x86 min/max instructions: return the second
// operand unless the first is strictly smaller (larger).
inline double lane_min(double a, double b) { return a < b ? a : b; }
inline double lane_max(double a, double b) { return a > b ? a : b; }

inline double spatial_iou_lane(const BoxQuery& q, double x0, double y0, double x1, double y1) {
  double iw = lane_min(q.x_max, x1) - lane_max(q.x_min, x0);
  double ih = lane_min(q.y_max, y1) - lane_max(q.y_min, y0);
  iw = lane_max(iw, 0.0);
  ih = lane_max(ih, 0.0);
  const double inter = iw * ih;
  const double area_q = (q.x_max - q.x_min) * (q.y_max - q.y_min);
  const double area_b = (x1 - x0) * (y1 - y0);
  const double uni = (area_q + area_b) - inter;
  return inter > 0.0 ? inter / uni : 0.0;
}

inline double temporal_iou_lane(const BoxQuery& q, double s, double e) {
  double inter = (lane_min(q.f_end, e) - lane_max(q.f_start, s)) + 1.0;
  inter = lane_max(inter, 0.0);
  const double len_q = (q.f_end - q.f_start) + 1.0;
  const double len_b = (e - s) + 1.0;
  const double uni = (len_q + len_b) - inter;
  return inter > 0.0 ? inter / uni : 0.0;
}

inline double volume_iou_lane(const BoxQuery& q, double x0, double y0, double x1, double y1,
                              double s, double e) {
  double iw = lane_min(q.x_max, x1) - lane_max(q.x_min, x0);
  double ih = lane_min(q.y_max, y1) - lane_max(q.y_min, y0);
  double it = (lane_min(q.f_end, e) - lane_max(q.f_start, s)) + 1.0;
  iw = lane_max(iw, 0.0);
  ih = lane_max(ih, 0.0);
  it = lane_max(it, 0.0);
  const double inter = (iw * ih) * it;
  const double vol_q = ((q.x_max - q.x_min) * (q.y_max - q.y_min)) * ((q.f_end - q.f_start) + 1.0);
  const double vol_b = ((x1 - x0) * (y1 - y0)) * ((e - s) + 1.0);
  const double uni = (vol_q + vol_b) - inter;
  return inter > 0.0 ? inter / uni : 0.0;
}

inline double distance_lane(double xi, double yi, double fi, double xj, double yj, double fj) {
  const double dx = xj - xi;
  const double dy = yj - yi;
  const double df = fj - fi;
  return std::sqrt((dx * dx + dy * dy) + df * df);
}

inline double linkage_lane(Linkage method, double a, double b, double n_k, double n_i, double n_j,
                           double d_ij) {
  switch (method) {
    case Linkage::single:
      return lane_min(a, b);
    case Linkage::complete:
      return lane_max(a, b);
    case Linkage::average:
      return (n_i * a + n_j * b) / (n_i + n_j);
    case Linkage::ward: {
      const double num = ((n_i + n_k) * (a * a) + (n_j + n_k) * (b * b)) - n_k * (d_ij * d_ij);
      return std::sqrt(lane_max(num / ((n_i + n_j) + n_k), 0.0));
    }
  }
  return a;
}

}  // namespace
}  // namespace actdet::simd
