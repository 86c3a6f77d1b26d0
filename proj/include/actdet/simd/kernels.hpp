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

// Data-parallel inner loops shared by the geometry, clustering, labeling and
// NMS code. Every kernel has a portable scalar reference and optional vector
// variants; all variants must agree bit for bit with the scalar one.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace actdet {

enum class Linkage { ward, average, single, complete };

namespace simd {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);

/// Column view over a batch of cuboids. Frame bounds are stored as doubles so
/// the temporal kernels can run in the same lanes as the spatial ones.
struct BoxColumns {
  const double* x_min = nullptr;
  const double* y_min = nullptr;
  const double* x_max = nullptr;
  const double* y_max = nullptr;
  const double* f_start = nullptr;
  const double* f_end = nullptr;
  std::size_t size = 0;
};

struct BoxQuery {
  double x_min, y_min, x_max, y_max, f_start, f_end;
};

/// Column view over clustering features; `f` is already multiplied by the
/// temporal scale.
struct PointColumns {
  const double* x = nullptr;
  const double* y = nullptr;
  const double* f = nullptr;
  std::size_t size = 0;
};

struct RowMin {
  std::size_t index;
  double value;
};

using IouManyFn = void (*)(const BoxQuery& q, const BoxColumns& boxes, double* out);
/// out[j] = Euclidean distance from (qx, qy, qf) to point j.
using DistanceRowFn = void (*)(double qx, double qy, double qf, const PointColumns& pts,
                               double* out);
/// Lowest index wins ties. `n` must be > 0.
using RowArgminFn = RowMin (*)(const double* row, std::size_t n);
/// Lance-Williams update of the merged cluster's distances. `out` may alias
/// `row_i` or `row_j`. `sizes[k]` is the member count of cluster k (0 when
/// inactive; inactive entries of the rows hold +inf).
using LinkageUpdateFn = void (*)(Linkage method, const double* row_i, const double* row_j,
                                 const double* sizes, double n_i, double n_j, double d_ij,
                                 double* out, std::size_t n);

struct KernelTable {
  Isa isa;
  IouManyFn spatial_iou_many;
  IouManyFn temporal_iou_many;
  IouManyFn volume_iou_many;
  DistanceRowFn distance_row;
  RowArgminFn row_argmin;
  LinkageUpdateFn linkage_update;
};

const KernelTable& scalar_kernels();

/// Tables usable on this CPU, scalar first.
std::vector<const KernelTable*> available_kernels();

/// Best table for this CPU, chosen once. Setting ACTDET_SIMD=scalar (or
/// avx2, neon) in the environment pins a specific variant when available.
const KernelTable& active_kernels();

}  // namespace simd
}  // namespace actdet
