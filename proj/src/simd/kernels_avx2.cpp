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

// Compiled with -mavx2. Nothing in here may run before the dispatcher has
// confirmed AVX2 support.

#include <immintrin.h>

#include <cstdint>

#include "lane_ops.hpp"
#include "tables.hpp"

namespace actdet::simd {
namespace {

constexpr std::size_t kLanes = 4;

inline __m256d clamp_zero(__m256d v) { return _mm256_max_pd(v, _mm256_setzero_pd()); }

// inter > 0 ? inter / uni : 0
inline __m256d safe_ratio(__m256d inter, __m256d uni) {
  const __m256d ratio = _mm256_div_pd(inter, uni);
  const __m256d positive = _mm256_cmp_pd(inter, _mm256_setzero_pd(), _CMP_GT_OQ);
  return _mm256_and_pd(ratio, positive);
}

void spatial_iou_many(const BoxQuery& q, const BoxColumns& b, double* out) {
  const __m256d qx0 = _mm256_set1_pd(q.x_min), qy0 = _mm256_set1_pd(q.y_min);
  const __m256d qx1 = _mm256_set1_pd(q.x_max), qy1 = _mm256_set1_pd(q.y_max);
  const __m256d area_q = _mm256_set1_pd((q.x_max - q.x_min) * (q.y_max - q.y_min));
  std::size_t k = 0;
  for (; k + kLanes <= b.size; k += kLanes) {
    const __m256d x0 = _mm256_loadu_pd(b.x_min + k), y0 = _mm256_loadu_pd(b.y_min + k);
    const __m256d x1 = _mm256_loadu_pd(b.x_max + k), y1 = _mm256_loadu_pd(b.y_max + k);
    const __m256d iw = clamp_zero(_mm256_sub_pd(_mm256_min_pd(qx1, x1), _mm256_max_pd(qx0, x0)));
    const __m256d ih = clamp_zero(_mm256_sub_pd(_mm256_min_pd(qy1, y1), _mm256_max_pd(qy0, y0)));
    const __m256d inter = _mm256_mul_pd(iw, ih);
    const __m256d area_b = _mm256_mul_pd(_mm256_sub_pd(x1, x0), _mm256_sub_pd(y1, y0));
    const __m256d uni = _mm256_sub_pd(_mm256_add_pd(area_q, area_b), inter);
    _mm256_storeu_pd(out + k, safe_ratio(inter, uni));
  }
  for (; k < b.size; ++k) {
    out[k] = spatial_iou_lane(q, b.x_min[k], b.y_min[k], b.x_max[k], b.y_max[k]);
  }
}

void temporal_iou_many(const BoxQuery& q, const BoxColumns& b, double* out) {
  const __m256d qs = _mm256_set1_pd(q.f_start), qe = _mm256_set1_pd(q.f_end);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d len_q = _mm256_set1_pd((q.f_end - q.f_start) + 1.0);
  std::size_t k = 0;
  for (; k + kLanes <= b.size; k += kLanes) {
    const __m256d s = _mm256_loadu_pd(b.f_start + k), e = _mm256_loadu_pd(b.f_end + k);
    const __m256d inter = clamp_zero(
        _mm256_add_pd(_mm256_sub_pd(_mm256_min_pd(qe, e), _mm256_max_pd(qs, s)), one));
    const __m256d len_b = _mm256_add_pd(_mm256_sub_pd(e, s), one);
    const __m256d uni = _mm256_sub_pd(_mm256_add_pd(len_q, len_b), inter);
    _mm256_storeu_pd(out + k, safe_ratio(inter, uni));
  }
  for (; k < b.size; ++k) out[k] = temporal_iou_lane(q, b.f_start[k], b.f_end[k]);
}

void volume_iou_many(const BoxQuery& q, const BoxColumns& b, double* out) {
  const __m256d qx0 = _mm256_set1_pd(q.x_min), qy0 = _mm256_set1_pd(q.y_min);
  const __m256d qx1 = _mm256_set1_pd(q.x_max), qy1 = _mm256_set1_pd(q.y_max);
  const __m256d qs = _mm256_set1_pd(q.f_start), qe = _mm256_set1_pd(q.f_end);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d vol_q = _mm256_set1_pd(((q.x_max - q.x_min) * (q.y_max - q.y_min)) *
                                       ((q.f_end - q.f_start) + 1.0));
  std::size_t k = 0;
  for (; k + kLanes <= b.size; k += kLanes) {
    const __m256d x0 = _mm256_loadu_pd(b.x_min + k), y0 = _mm256_loadu_pd(b.y_min + k);
    const __m256d x1 = _mm256_loadu_pd(b.x_max + k), y1 = _mm256_loadu_pd(b.y_max + k);
    const __m256d s = _mm256_loadu_pd(b.f_start + k), e = _mm256_loadu_pd(b.f_end + k);
    const __m256d iw = clamp_zero(_mm256_sub_pd(_mm256_min_pd(qx1, x1), _mm256_max_pd(qx0, x0)));
    const __m256d ih = clamp_zero(_mm256_sub_pd(_mm256_min_pd(qy1, y1), _mm256_max_pd(qy0, y0)));
    const __m256d it = clamp_zero(
        _mm256_add_pd(_mm256_sub_pd(_mm256_min_pd(qe, e), _mm256_max_pd(qs, s)), one));
    const __m256d inter = _mm256_mul_pd(_mm256_mul_pd(iw, ih), it);
    const __m256d area_b = _mm256_mul_pd(_mm256_sub_pd(x1, x0), _mm256_sub_pd(y1, y0));
    const __m256d vol_b = _mm256_mul_pd(area_b, _mm256_add_pd(_mm256_sub_pd(e, s), one));
    const __m256d uni = _mm256_sub_pd(_mm256_add_pd(vol_q, vol_b), inter);
    _mm256_storeu_pd(out + k, safe_ratio(inter, uni));
  }
  for (; k < b.size; ++k) {
    out[k] = volume_iou_lane(q, b.x_min[k], b.y_min[k], b.x_max[k], b.y_max[k], b.f_start[k],
                             b.f_end[k]);
  }
}

void distance_row(double qx, double qy, double qf, const PointColumns& p, double* out) {
  const __m256d xi = _mm256_set1_pd(qx), yi = _mm256_set1_pd(qy);
  const __m256d fi = _mm256_set1_pd(qf);
  std::size_t j = 0;
  for (; j + kLanes <= p.size; j += kLanes) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(p.x + j), xi);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(p.y + j), yi);
    const __m256d df = _mm256_sub_pd(_mm256_loadu_pd(p.f + j), fi);
    const __m256d sq = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)),
                                     _mm256_mul_pd(df, df));
    _mm256_storeu_pd(out + j, _mm256_sqrt_pd(sq));
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
  // Per-lane running minimum; strict comparison keeps the earliest index in
  // each lane.
  __m256d best_val = _mm256_loadu_pd(row);
  __m256i best_idx = _mm256_setr_epi64x(0, 1, 2, 3);
  __m256i idx = best_idx;
  const __m256i step = _mm256_set1_epi64x(kLanes);
  std::size_t k = kLanes;
  for (; k + kLanes <= n; k += kLanes) {
    idx = _mm256_add_epi64(idx, step);
    const __m256d v = _mm256_loadu_pd(row + k);
    const __m256d less = _mm256_cmp_pd(v, best_val, _CMP_LT_OQ);
    best_val = _mm256_blendv_pd(best_val, v, less);
    best_idx = _mm256_castpd_si256(
        _mm256_blendv_pd(_mm256_castsi256_pd(best_idx), _mm256_castsi256_pd(idx), less));
  }
  alignas(32) double vals[kLanes];
  alignas(32) std::int64_t idxs[kLanes];
  _mm256_store_pd(vals, best_val);
  _mm256_store_si256(reinterpret_cast<__m256i*>(idxs), best_idx);
  RowMin best{static_cast<std::size_t>(idxs[0]), vals[0]};
  for (std::size_t l = 1; l < kLanes; ++l) {
    const auto li = static_cast<std::size_t>(idxs[l]);
    if (vals[l] < best.value || (vals[l] == best.value && li < best.index)) best = {li, vals[l]};
  }
  for (; k < n; ++k) {
    if (row[k] < best.value) best = {k, row[k]};
  }
  return best;
}

void linkage_update(Linkage method, const double* row_i, const double* row_j, const double* sizes,
                    double n_i, double n_j, double d_ij, double* out, std::size_t n) {
  std::size_t k = 0;
  const __m256d ni = _mm256_set1_pd(n_i), nj = _mm256_set1_pd(n_j);
  switch (method) {
    case Linkage::single:
      for (; k + kLanes <= n; k += kLanes) {
        _mm256_storeu_pd(out + k,
                         _mm256_min_pd(_mm256_loadu_pd(row_i + k), _mm256_loadu_pd(row_j + k)));
      }
      break;
    case Linkage::complete:
      for (; k + kLanes <= n; k += kLanes) {
        _mm256_storeu_pd(out + k,
                         _mm256_max_pd(_mm256_loadu_pd(row_i + k), _mm256_loadu_pd(row_j + k)));
      }
      break;
    case Linkage::average: {
      const __m256d total = _mm256_set1_pd(n_i + n_j);
      for (; k + kLanes <= n; k += kLanes) {
        const __m256d a = _mm256_loadu_pd(row_i + k), b = _mm256_loadu_pd(row_j + k);
        const __m256d num = _mm256_add_pd(_mm256_mul_pd(ni, a), _mm256_mul_pd(nj, b));
        _mm256_storeu_pd(out + k, _mm256_div_pd(num, total));
      }
      break;
    }
    case Linkage::ward: {
      const __m256d dij2 = _mm256_set1_pd(d_ij * d_ij);
      const __m256d nij = _mm256_set1_pd(n_i + n_j);
      for (; k + kLanes <= n; k += kLanes) {
        const __m256d a = _mm256_loadu_pd(row_i + k), b = _mm256_loadu_pd(row_j + k);
        const __m256d nk = _mm256_loadu_pd(sizes + k);
        const __m256d wa = _mm256_mul_pd(_mm256_add_pd(ni, nk), _mm256_mul_pd(a, a));
        const __m256d wb = _mm256_mul_pd(_mm256_add_pd(nj, nk), _mm256_mul_pd(b, b));
        const __m256d num = _mm256_sub_pd(_mm256_add_pd(wa, wb), _mm256_mul_pd(nk, dij2));
        const __m256d q = _mm256_div_pd(num, _mm256_add_pd(nij, nk));
        _mm256_storeu_pd(out + k, _mm256_sqrt_pd(clamp_zero(q)));
      }
      break;
    }
  }
  for (; k < n; ++k) out[k] = linkage_lane(method, row_i[k], row_j[k], sizes[k], n_i, n_j, d_ij);
}

}  // namespace

namespace detail {

const KernelTable& avx2_kernels() {
  static const KernelTable table{Isa::avx2,      spatial_iou_many, temporal_iou_many,
                                 volume_iou_many, distance_row,   row_argmin,
                                 linkage_update};
  return table;
}

}  // namespace detail
}  // namespace actdet::simd
