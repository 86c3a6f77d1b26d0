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
#include <string_view>
#include <vector>

#include "actdet/ingest.hpp"
#include "actdet/proposal.hpp"
#include "actdet/simd/kernels.hpp"

namespace actdet {

std::string_view to_string(Linkage method);
/// Throws ValidationError on an unknown name.
Linkage parse_linkage(std::string_view name);

/// Clustering feature of one detection: box centre and frame.
struct FeaturePoint {
  double x = 0;
  double y = 0;
  int f = 0;
  std::size_t detection_ref = 0;
};

struct ClusterParams {
  Linkage linkage = Linkage::ward;
  /// Multiplier applied to the frame index before distances are taken.
  double temporal_scale = 1.0;
  /// Clusters per frame of video; k = max(1, ceil(k_ratio * num_frames)).
  double k_ratio = 0.028;
  int min_cluster_size = 1;
  /// Cluster each object class on its own instead of jointly.
  bool per_class = false;

  /// Throws ValidationError when a field is out of range.
  void validate() const;

  friend bool operator==(const ClusterParams&, const ClusterParams&) = default;
};

/// One agglomeration step. Leaves are numbered 0..n-1 and the cluster created
/// by step s gets node id n + s. `left < right`.
struct Merge {
  std::size_t left;
  std::size_t right;
  double distance;
  std::size_t size;
};

struct LinkageTree {
  std::size_t num_leaves = 0;
  std::vector<Merge> merges;
};

/// Clusters as sorted lists of point indices, ordered by smallest member.
using Partition = std::vector<std::vector<std::size_t>>;

std::vector<FeaturePoint> feature_points(std::span<const Detection> dets);

/// Greedy agglomerative clustering with Euclidean distance on
/// (x, y, temporal_scale * f). Among equal merge distances the pair with the
/// lowest (smaller leaf, larger leaf) representatives merges first, where a
/// cluster is represented by its lowest leaf index. Throws ValidationError on
/// empty input.
LinkageTree build_linkage(std::span<const FeaturePoint> points, const ClusterParams& params);

/// Undoes all but the first n - k merges, leaving min(k, n) clusters.
Partition cut_tree(const LinkageTree& tree, std::size_t k);

std::size_t cluster_count(const ClusterParams& params, int num_frames);

/// One clustering proposal per cluster with at least min_cluster_size
/// members, covering every member box and frame. Partition entries index
/// `points`; points reference `dets`. Ids are "<video>/c<cluster index>" with
/// `id_offset` added to the index.
std::vector<Proposal> clusters_to_proposals(const Partition& partition,
                                            std::span<const FeaturePoint> points,
                                            std::span<const Detection> dets,
                                            const VideoMeta& video, const ClusterParams& params,
                                            std::size_t id_offset = 0);

/// Full clustering stage for one video.
std::vector<Proposal> cluster_video(std::span<const Detection> dets, const VideoMeta& video,
                                    const ClusterParams& params);

}  // namespace actdet
