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

#include "actdet/geometry.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include "actdet/simd/kernels.hpp"

namespace actdet {
namespace {

simd::BoxQuery to_query(const Cuboid& c) {
  return {c.x_min, c.y_min, c.x_max, c.y_max, static_cast<double>(c.f_start),
          static_cast<double>(c.f_end)};
}

simd::BoxColumns single(const Cuboid& c, double (&storage)[6]) {
  storage[0] = c.x_min;
  storage[1] = c.y_min;
  storage[2] = c.x_max;
  storage[3] = c.y_max;
  storage[4] = c.f_start;
  storage[5] = c.f_end;
  return {&storage[0], &storage[1], &storage[2], &storage[3], &storage[4], &storage[5], 1};
}

}  // namespace

bool Cuboid::valid() const {
  return std::isfinite(x_min) && std::isfinite(y_min) && std::isfinite(x_max) &&
         std::isfinite(y_max) && x_min < x_max && y_min < y_max && f_start <= f_end;
}

bool canonical_less(const Cuboid& a, const Cuboid& b) {
  return std::tie(a.f_start, a.f_end, a.x_min, a.y_min, a.x_max, a.y_max) <
         std::tie(b.f_start, b.f_end, b.x_min, b.y_min, b.x_max, b.y_max);
}

// The pairwise functions go through the scalar reference kernels so that a
// single pair and a batch never disagree.
double spatial_iou(const Cuboid& a, const Cuboid& b) {
  double storage[6];
  double out = 0.0;
  simd::scalar_kernels().spatial_iou_many(to_query(a), single(b, storage), &out);
  return out;
}

double temporal_iou(const Cuboid& a, const Cuboid& b) {
  double storage[6];
  double out = 0.0;
  simd::scalar_kernels().temporal_iou_many(to_query(a), single(b, storage), &out);
  return out;
}

double iou_3d(const Cuboid& a, const Cuboid& b) {
  double storage[6];
  double out = 0.0;
  simd::scalar_kernels().volume_iou_many(to_query(a), single(b, storage), &out);
  return out;
}

Cuboid square_pad(const Cuboid& c) {
  const double side = std::max(c.width(), c.height());
  Cuboid out = c;
  if (c.width() < side) {
    const double pad = 0.5 * (side - c.width());
    out.x_min = c.x_min - pad;
    out.x_max = c.x_max + pad;
  } else if (c.height() < side) {
    const double pad = 0.5 * (side - c.height());
    out.y_min = c.y_min - pad;
    out.y_max = c.y_max + pad;
  }
  return out;
}

Cuboid bounding_cuboid(std::span<const Cuboid> items) {
  if (items.empty()) throw std::invalid_argument("bounding_cuboid: empty input");
  Cuboid env = items.front();
  for (const auto& c : items.subspan(1)) {
    env.x_min = std::min(env.x_min, c.x_min);
    env.y_min = std::min(env.y_min, c.y_min);
    env.x_max = std::max(env.x_max, c.x_max);
    env.y_max = std::max(env.y_max, c.y_max);
    env.f_start = std::min(env.f_start, c.f_start);
    env.f_end = std::max(env.f_end, c.f_end);
  }
  return env;
}

CuboidColumns::CuboidColumns(std::span<const Cuboid> items) {
  x_min_.reserve(items.size());
  y_min_.reserve(items.size());
  x_max_.reserve(items.size());
  y_max_.reserve(items.size());
  f_start_.reserve(items.size());
  f_end_.reserve(items.size());
  for (const auto& c : items) push_back(c);
}

void CuboidColumns::push_back(const Cuboid& c) {
  x_min_.push_back(c.x_min);
  y_min_.push_back(c.y_min);
  x_max_.push_back(c.x_max);
  y_max_.push_back(c.y_max);
  f_start_.push_back(c.f_start);
  f_end_.push_back(c.f_end);
}

namespace {

simd::BoxColumns view(const std::vector<double>& x0, const std::vector<double>& y0,
                      const std::vector<double>& x1, const std::vector<double>& y1,
                      const std::vector<double>& s, const std::vector<double>& e) {
  return {x0.data(), y0.data(), x1.data(), y1.data(), s.data(), e.data(), x0.size()};
}

}  // namespace

void CuboidColumns::spatial_iou(const Cuboid& query, std::span<double> out) const {
  assert(out.size() >= size());
  simd::active_kernels().spatial_iou_many(
      to_query(query), view(x_min_, y_min_, x_max_, y_max_, f_start_, f_end_), out.data());
}

void CuboidColumns::temporal_iou(const Cuboid& query, std::span<double> out) const {
  assert(out.size() >= size());
  simd::active_kernels().temporal_iou_many(
      to_query(query), view(x_min_, y_min_, x_max_, y_max_, f_start_, f_end_), out.data());
}

void CuboidColumns::iou_3d(const Cuboid& query, std::span<double> out) const {
  assert(out.size() >= size());
  simd::active_kernels().volume_iou_many(
      to_query(query), view(x_min_, y_min_, x_max_, y_max_, f_start_, f_end_), out.data());
}

}  // namespace actdet
