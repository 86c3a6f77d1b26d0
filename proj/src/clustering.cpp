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

#include "actdet/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>

#include "actdet/errors.hpp"

namespace actdet {

std::string_view to_string(Linkage method) {
  switch (method) {
    case Linkage::ward:
      return "ward";
    case Linkage::average:
      return "average";
    case Linkage::single:
      return "single";
    case Linkage::complete:
      return "complete";
  }
  return "ward";
}

Linkage parse_linkage(std::string_view name) {
  for (Linkage m : {Linkage::ward, Linkage::average, Linkage::single, Linkage::complete}) {
    if (to_string(m) == name) return m;
  }
  throw ValidationError("unknown linkage '" + std::string(name) +
                        "'; expected ward, average, single or complete");
}

void ClusterParams::validate() const {
  if (!(temporal_scale > 0.0) || !std::isfinite(temporal_scale)) {
    throw ValidationError("cluster temporal_scale must be positive");
  }
  if (!(k_ratio > 0.0) || !std::isfinite(k_ratio)) {
    throw ValidationError("cluster k_ratio must be positive");
  }
  if (min_cluster_size < 1) throw ValidationError("min_cluster_size must be at least 1");
}

std::vector<FeaturePoint> feature_points(std::span<const Detection> dets) {
  std::vector<FeaturePoint> pts;
  pts.reserve(dets.size());
  for (std::size_t i = 0; i < dets.size(); ++i) {
    pts.push_back({dets[i].center_x(), dets[i].center_y(), dets[i].frame, i});
  }
  return pts;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Packed strictly-upper-triangular distance matrix; row k holds d(k, j) for
// j = k+1 .. n-1 contiguously.
class CondensedMatrix {
 public:
  explicit CondensedMatrix(std::size_t n) : n_(n), data_(n * (n - 1) / 2, kInf) {}

  double* row(std::size_t k) { return data_.data() + offset(k); }
  std::size_t row_size(std::size_t k) const { return n_ - k - 1; }
  double& at(std::size_t a, std::size_t b) {
    return a < b ? data_[offset(a) + (b - a - 1)] : data_[offset(b) + (a - b - 1)];
  }

 private:
  std::size_t offset(std::size_t k) const { return k * n_ - k * (k + 1) / 2; }

  std::size_t n_;
  std::vector<double> data_;
};

}  // namespace

LinkageTree build_linkage(std::span<const FeaturePoint> points, const ClusterParams& params) {
  params.validate();
  const std::size_t n = points.size();
  if (n == 0) throw ValidationError("build_linkage: no points to cluster");
  LinkageTree tree;
  tree.num_leaves = n;
  if (n == 1) return tree;

  const auto& kern = simd::active_kernels();

  std::vector<double> xs(n), ys(n), fs(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = points[i].x;
    ys[i] = points[i].y;
    fs[i] = params.temporal_scale * points[i].f;
  }

  CondensedMatrix dist(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const simd::PointColumns tail{xs.data() + i + 1, ys.data() + i + 1, fs.data() + i + 1,
                                  n - i - 1};
    kern.distance_row(xs[i], ys[i], fs[i], tail, dist.row(i));
  }

  // Slot k holds the cluster whose lowest leaf is k. nn[k] is the nearest
  // active slot above k (lowest index on ties).
  std::vector<double> sizes(n, 1.0);
  std::vector<std::size_t> node(n);
  std::iota(node.begin(), node.end(), std::size_t{0});
  std::vector<std::size_t> nn(n, n);
  std::vector<double> nn_dist(n, kInf);
  std::vector<std::size_t> active(n);
  std::iota(active.begin(), active.end(), std::size_t{0});

  auto refresh = [&](std::size_t k) {
    if (dist.row_size(k) == 0) {
      nn[k] = n;
      nn_dist[k] = kInf;
      return;
    }
    const simd::RowMin m = kern.row_argmin(dist.row(k), dist.row_size(k));
    nn[k] = m.value == kInf ? n : k + 1 + m.index;
    nn_dist[k] = m.value;
  };
  for (std::size_t k = 0; k + 1 < n; ++k) refresh(k);

  std::vector<double> col_i(n), col_j(n), merged(n);
  tree.merges.reserve(n - 1);

  for (std::size_t step = 0; step + 1 < n; ++step) {
    // Global minimum; scanning slots in ascending order with a strict
    // comparison yields the lexicographically smallest pair on ties.
    std::size_t i = n;
    double best = kInf;
    for (std::size_t k : active) {
      if (nn[k] < n && (i == n || nn_dist[k] < best)) {
        i = k;
        best = nn_dist[k];
      }
    }
    const std::size_t j = nn[i];
    const double d_ij = best;

    const double n_i = sizes[i];
    const double n_j = sizes[j];
    tree.merges.push_back({std::min(node[i], node[j]), std::max(node[i], node[j]), d_ij,
                           static_cast<std::size_t>(n_i + n_j)});

    // Gather full distance vectors of i and j, update them in one batch, then
    // scatter into the packed matrix.
    for (std::size_t k = 0; k < n; ++k) {
      col_i[k] = k == i ? kInf : dist.at(i, k);
      col_j[k] = k == j ? kInf : dist.at(j, k);
    }
    sizes[j] = 0.0;
    kern.linkage_update(params.linkage, col_i.data(), col_j.data(), sizes.data(), n_i, n_j, d_ij,
                        merged.data(), n);
    sizes[i] = n_i + n_j;
    node[i] = n + step;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i || k == j) continue;
      dist.at(i, k) = sizes[k] > 0.0 ? merged[k] : kInf;
      dist.at(j, k) = kInf;
    }
    dist.at(i, j) = kInf;
    active.erase(std::find(active.begin(), active.end(), j));

    for (std::size_t k : active) {
      if (k < i) {
        if (nn[k] == i || nn[k] == j) {
          refresh(k);
        } else {
          const double d = dist.at(k, i);
          if (d < nn_dist[k] || (d == nn_dist[k] && i < nn[k])) {
            nn[k] = i;
            nn_dist[k] = d;
          }
        }
      } else if (k == i) {
        refresh(k);
      } else if (k < j) {
        if (nn[k] == j) refresh(k);
      } else {
        break;
      }
    }
  }
  return tree;
}

namespace {

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent[b] = a;
  }
  std::vector<std::size_t> parent;
};

}  // namespace

Partition cut_tree(const LinkageTree& tree, std::size_t k) {
  if (k == 0) throw ValidationError("cut_tree: k must be at least 1");
  const std::size_t n = tree.num_leaves;
  if (n == 0) return {};
  const std::size_t merges = n - std::min(k, n);

  // Any leaf of a node serves as its handle in the disjoint sets.
  std::vector<std::size_t> leaf_of(n + tree.merges.size());
  std::iota(leaf_of.begin(), leaf_of.begin() + static_cast<std::ptrdiff_t>(n), std::size_t{0});
  DisjointSets sets(n);
  for (std::size_t s = 0; s < merges; ++s) {
    const Merge& m = tree.merges[s];
    sets.unite(leaf_of[m.left], leaf_of[m.right]);
    leaf_of[n + s] = leaf_of[m.left];
  }

  std::map<std::size_t, std::size_t> slot_of_root;
  Partition out;
  for (std::size_t leaf = 0; leaf < n; ++leaf) {
    const std::size_t root = sets.find(leaf);
    auto [it, inserted] = slot_of_root.emplace(root, out.size());
    if (inserted) out.emplace_back();
    out[it->second].push_back(leaf);
  }
  return out;
}

std::size_t cluster_count(const ClusterParams& params, int num_frames) {
  const double k = std::ceil(params.k_ratio * static_cast<double>(num_frames));
  return k < 1.0 ? 1 : static_cast<std::size_t>(k);
}

std::vector<Proposal> clusters_to_proposals(const Partition& partition,
                                            std::span<const FeaturePoint> points,
                                            std::span<const Detection> dets,
                                            const VideoMeta& video, const ClusterParams& params,
                                            std::size_t id_offset) {
  std::vector<Proposal> out;
  std::vector<Cuboid> boxes;
  for (std::size_t c = 0; c < partition.size(); ++c) {
    const auto& members = partition[c];
    if (members.size() < static_cast<std::size_t>(params.min_cluster_size)) continue;
    boxes.clear();
    for (std::size_t p : members) boxes.push_back(dets[points[p].detection_ref].cuboid());
    char suffix[32];
    std::snprintf(suffix, sizeof suffix, "/c%04zu", c + id_offset);
    Proposal prop;
    prop.id = video.video_id + suffix;
    prop.video_id = video.video_id;
    prop.provenance = Provenance::clustering;
    prop.cuboid = bounding_cuboid(boxes);
    out.push_back(std::move(prop));
  }
  return out;
}

std::vector<Proposal> cluster_video(std::span<const Detection> dets, const VideoMeta& video,
                                    const ClusterParams& params) {
  params.validate();
  if (dets.empty()) return {};
  const std::size_t k = cluster_count(params, video.num_frames);

  if (!params.per_class) {
    const auto points = feature_points(dets);
    const auto tree = build_linkage(points, params);
    return clusters_to_proposals(cut_tree(tree, k), points, dets, video, params);
  }

  std::map<std::string, std::vector<FeaturePoint>> by_class;
  for (const auto& p : feature_points(dets)) by_class[dets[p.detection_ref].object_class].push_back(p);
  std::vector<Proposal> out;
  std::size_t offset = 0;
  for (const auto& [cls, points] : by_class) {
    const auto partition = cut_tree(build_linkage(points, params), k);
    auto props = clusters_to_proposals(partition, points, dets, video, params, offset);
    offset += partition.size();
    out.insert(out.end(), std::make_move_iterator(props.begin()),
               std::make_move_iterator(props.end()));
  }
  return out;
}

}  // namespace actdet
