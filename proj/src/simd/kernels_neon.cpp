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

// AArch64 only; Advanced SIMD is part of the base architecture there.

#include <arm_neon.h>

#include <cstdint>

#include "lane_ops.hpp"
#include "tables.hpp"

namespace actdet::simd {
namespace {

constexpr std::size_t kLanes = 2;

// Mirrors lane_min / lane_max exactly, including the choice of operand on
// equality.
inline float64x2_t vmin(float64x2_t a, float64x2_t b) { return vbslq_f64(vcltq_f64(a, b), a, b); }
inline float64x2_t vmax(float64x2_t a, float64x2_t b) { return vbslq_f64(vcgtq_f64(a, b), a, b); }
inline float64x2_t clamp_zero(float64x2_t v) { return vmax(v, vdupq_n_f64(0.0)); }

inline float64x2_t safe_ratio(float64x2_t inter, float64x2_t uni) {
  const uint64x2_t positive = vcgtq_f64(inter, vdupq_n_f64(0.0));
  return vbslq_f64(positive, vdivq_f64(inter, uni), vdupq_n_f64(0.0));
}

void spatial_iou_many(const BoxQuery& q, const BoxColumns& b, double* out) {
  const float64x2_t qx0 = vdupq_n_f64(q.x_min), qy0 = vdupq_n_f64(q.y_min);
  const float64x2_t qx1 = vdupq_n_f64(q.x_max), qy1 = vdupq_n_f64(q.y_max);
  const float64x2_t area_q = vdupq_n_f64((q.x_max - q.x_min) * (q.y_max - q.y_min));
  std::size_t k = 0;
  for (; k + kLanes <= b.size; k += kLanes) {
    const float64x2_t x0 = vld1q_f64(b.x_min + k), y0 = vld1q_f64(b.y_min + k);
    const float64x2_t x1 = vld1q_f64(b.x_max + k), y1 = vld1q_f64(b.y_max + k);
    const float64x2_t iw = clamp_zero(vsubq_f64(vmin(qx1, x1), vmax(qx0, x0)));
    const float64x2_t ih = clamp_zero(vsubq_f64(vmin(qy1, y1), vmax(qy0, y0)));
    const float64x2_t inter = vmulq_f64(iw, ih);
    const float64x2_t area_b = vmulq_f64(vsubq_f64(x1, x0), vsubq_f64(y1, y0));
    const float64x2_t uni = vsubq_f64(vaddq_f64(area_q, area_b), inter);
    vst1q_f64(out + k, safe_ratio(inter, uni));
  }
  for (; k < b.size; ++k) {
    out[k] = spatial_iou_lane(q, b.x_min[k], b.y_min[k], b.x_max[k], b.y_max[k]);
  }
}

void temporal_iou_many(const BoxQuery& q, const BoxColumns& b, double* out) {
  const float64x2_t qs = vdupq_n_f64(q.f_start), qe = vdupq_n_f64(q.f_end);
  const float64x2_t one = vdupq_n_f64(1.0);
  const float64x2_t len_q = vdupq_n_f64((q.f_end - q.f_start) + 1.0);
  std::size_t k = 0;
  for (; k + kLanes <= b.size; k += kLanes) {
    const float64x2_t s = vld1q_f64(b.f_start + k), e = vld1q_f64(b.f_end + k);
    const float64x2_t inter = clamp_zero(vaddq_f64(vsubq_f64(vmin(qe, e), vmax(qs, s)), one));
    const float64x2_t len_b = vaddq_f64(vsubq_f64(e, s), one);
    const float64x2_t uni = vsubq_f64(vaddq_f64(len_q, len_b), inter);
    vst1q_f64(out + k, safe_ratio(inter, uni));
  }
  for (; k < b.size; ++k) out[k] = temporal_iou_lane(q, b.f_start[k], b.f_end[k]);
}

void volume_iou_many(const BoxQuery& q, const BoxColumns& b, double* out) {
  const float64x2_t qx0 = vdupq_n_f64(q.x_min), qy0 = vdupq_n_f64(q.y_min);
  const float64x2_t qx1 = vdupq_n_f64(q.x_max), qy1 = vdupq_n_f64(q.y_max);
  const float64x2_t qs = vdupq_n_f64(q.f_start), qe = vdupq_n_f64(q.f_end);
  const float64x2_t one = vdupq_n_f64(1.0);
  const float64x2_t vol_q = vdupq_n_f64(((q.x_max - q.x_min) * (q.y_max - q.y_min)) *
                                        ((q.f_end - q.f_start) + 1.0));
  std::size_t k = 0;
  for (; k + kLanes <= b.size; k += kLanes) {
    const float64x2_t x0 = vld1q_f64(b.x_min + k), y0 = vld1q_f64(b.y_min + k);
    const float64x2_t x1 = vld1q_f64(b.x_max + k), y1 = vld1q_f64(b.y_max + k);
    const float64x2_t s = vld1q_f64(b.f_start + k), e = vld1q_f64(b.f_end + k);
    const float64x2_t iw = clamp_zero(vsubq_f64(vmin(qx1, x1), vmax(qx0, x0)));
    const float64x2_t ih = clamp_zero(vsubq_f64(vmin(qy1, y1), vmax(qy0, y0)));
    const float64x2_t it = clamp_zero(vaddq_f64(vsubq_f64(vmin(qe, e), vmax(qs, s)), one));
    const float64x2_t inter = vmulq_f64(vmulq_f64(iw, ih), it);
    const float64x2_t area_b = vmulq_f64(vsubq_f64(x1, x0), vsubq_f64(y1, y0));
    const float64x2_t vol_b = vmulq_f64(area_b, vaddq_f64(vsubq_f64(e, s), one));
    const float64x2_t uni = vsubq_f64(vaddq_f64(vol_q, vol_b), inter);
    vst1q_f64(out + k, safe_ratio(inter, uni));
  }
  for (; k < b.size; ++k) {
    out[k] = volume_iou_lane(q, b.x_min[k], b.y_min[k], b.x_max[k], b.y_max[k], b.f_start[k],
                             b.f_end[k]);
  }
}

void distance_row(double qx, double qy, double qf, const PointColumns& p, double* out) {
  const float64x2_t xi = vdupq_n_f64(qx), yi = vdupq_n_f64(qy);
  const float64x2_t fi = vdupq_n_f64(qf);
  std::size_t j = 0;
  for (; j + kLanes <= p.size; j += kLanes) {
    const float64x2_t dx = vsubq_f64(vld1q_f64(p.x + j), xi);
    const float64x2_t dy = vsubq_f64(vld1q_f64(p.y + j), yi);
    const float64x2_t df = vsubq_f64(vld1q_f64(p.f + j), fi);
    const float64x2_t sq =
        vaddq_f64(vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy)), vmulq_f64(df, df));
    vst1q_f64(out + j, vsqrtq_f64(sq));
  }
  for (; j < p.size; ++j) out[j] = distance_lane(qx, qy, qf, p.x[j], p.y[j], p.f[j]);
}

RowMin row_argmin(const double* row, std::size_t n) {
  if (n < 2 * kLanes) {
    RowMin best{0, row[0]};
    for (std::size_t k = 1; k < n; ++k) {
      if (row[k] < best.value) best = {k, row[k]};
    }
    return best;
  }
  float64x2_t best_val = vld1q_f64(row);
  const std::uint64_t start[2] = {0, 1};
  uint64x2_t best_idx = vld1q_u64(start);
  uint64x2_t idx = best_idx;
  const uint64x2_t step = vdupq_n_u64(kLanes);
  std::size_t k = kLanes;
  for (; k + kLanes <= n; k += kLanes) {
    idx = vaddq_u64(idx, step);
    const float64x2_t v = vld1q_f64(row + k);
    const uint64x2_t less = vcltq_f64(v, best_val);
    best_val = vbslq_f64(less, v, best_val);
    best_idx = vbslq_u64(less, idx, best_idx);
  }
  double vals[kLanes];
  std::uint64_t idxs[kLanes];
  vst1q_f64(vals, best_val);
  vst1q_u64(idxs, best_idx);
  RowMin best{static_cast<std::size_t>(idxs[0]), vals[0]};
  const auto li = static_cast<std::size_t>(idxs[1]);
  if (vals[1] < best.value || (vals[1] == best.value && li < best.index)) best = {li, vals[1]};
  for (; k < n; ++k) {
    if (row[k] < best.value) best = {k, row[k]};
  }
  return best;
}

void linkage_update(Linkage method, const double* row_i, const double* row_j, const double* sizes,
                    double n_i, double n_j, double d_ij, double* out, std::size_t n) {
  std::size_t k = 0;
  const float64x2_t ni = vdupq_n_f64(n_i), nj = vdupq_n_f64(n_j);
  switch (method) {
    case Linkage::single:
      for (; k + kLanes <= n; k += kLanes) {
        vst1q_f64(out + k, vmin(vld1q_f64(row_i + k), vld1q_f64(row_j + k)));
      }
      break;
    case Linkage::complete:
      for (; k + kLanes <= n; k += kLanes) {
        vst1q_f64(out + k, vmax(vld1q_f64(row_i + k), vld1q_f64(row_j + k)));
      }
      break;
    case Linkage::average: {
      const float64x2_t total = vdupq_n_f64(n_i + n_j);
      for (; k + kLanes <= n; k += kLanes) {
        const float64x2_t a = vld1q_f64(row_i + k), b = vld1q_f64(row_j + k);
        vst1q_f64(out + k, vdivq_f64(vaddq_f64(vmulq_f64(ni, a), vmulq_f64(nj, b)), total));
      }
      break;
    }
    case Linkage::ward: {
      const float64x2_t dij2 = vdupq_n_f64(d_ij * d_ij);
      const float64x2_t nij = vdupq_n_f64(n_i + n_j);
      for (; k + kLanes <= n; k += kLanes) {
        const float64x2_t a = vld1q_f64(row_i + k), b = vld1q_f64(row_j + k);
        const float64x2_t nk = vld1q_f64(sizes + k);
        const float64x2_t wa = vmulq_f64(vaddq_f64(ni, nk), vmulq_f64(a, a));
        const float64x2_t wb = vmulq_f64(vaddq_f64(nj, nk), vmulq_f64(b, b));
        const float64x2_t num = vsubq_f64(vaddq_f64(wa, wb), vmulq_f64(nk, dij2));
        const float64x2_t q = vdivq_f64(num, vaddq_f64(nij, nk));
        vst1q_f64(out + k, vsqrtq_f64(clamp_zero(q)));
      }
      break;
    }
  }
  for (; k < n; ++k) out[k] = linkage_lane(method, row_i[k], row_j[k], sizes[k], n_i, n_j, d_ij);
}

}  // namespace

namespace detail {

const KernelTable& neon_kernels() {
  static const KernelTable table{Isa::neon,      spatial_iou_many, temporal_iou_many,
                                 volume_iou_many, distance_row,   row_argmin,
                                 linkage_update};
  return table;
}

}  // namespace detail
}  // namespace actdet::simd
