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

#include "actdet/simd/kernels.hpp"
#include "lane_ops.hpp"

namespace actdet::simd {
namespace {

void spatial_iou_many(const BoxQuery& q, const BoxColumns& b, double* out) {
  for (std::size_t k = 0; k < b.size; ++k) {
    out[k] = spatial_iou_lane(q, b.x_min[k], b.y_min[k], b.x_max[k], b.y_max[k]);
  }
}

void temporal_iou_many(const BoxQuery& q, const BoxColumns& b, double* out) {
  for (std::size_t k = 0; k < b.size; ++k) {
    out[k] = temporal_iou_lane(q, b.f_start[k], b.f_end[k]);
  }
}

void volume_iou_many(const BoxQuery& q, const BoxColumns& b, double* out) {
  for (std::size_t k = 0; k < b.size; ++k) {
    out[k] = volume_iou_lane(q, b.x_min[k], b.y_min[k], b.x_max[k], b.y_max[k], b.f_start[k],
                             b.f_end[k]);
  }
}

void distance_row(double qx, double qy, double qf, const PointColumns& p, double* out) {
  for (std::size_t j = 0; j < p.size; ++j) {
    out[j] = distance_lane(qx, qy, qf, p.x[j], p.y[j], p.f[j]);
  }
}

RowMin row_argmin(const double* row, std::size_t n) {
  RowMin best{0, row[0]};
  for (std::size_t k = 1; k < n; ++k) {
    if (row[k] < best.value) best = {k, row[k]};
  }
  return best;
}

void linkage_update(Linkage method, const double* row_i, const double* row_j, const double* sizes,
                    double n_i, double n_j, double d_ij, double* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = linkage_lane(method, row_i[k], row_j[k], sizes[k], n_i, n_j, d_ij);
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::scalar,   spatial_iou_many, temporal_iou_many,
                                 volume_iou_many, distance_row,   row_argmin,
                                 linkage_update};
  return table;
}

}  // namespace actdet::simd
