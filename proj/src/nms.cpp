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

#include "actdet/nms.hpp"

#include <algorithm>
#include <tuple>

#include "actdet/errors.hpp"

namespace actdet {

void NmsParams::validate() const {
  if (!(temporal_iou_thresh >= 0.0 && temporal_iou_thresh <= 1.0) ||
      !(spatial_iou_thresh >= 0.0 && spatial_iou_thresh <= 1.0)) {
    throw ValidationError("NMS thresholds must lie in [0, 1]");
  }
}

bool nms_rank_less(const ScoredDetection& a, const ScoredDetection& b) {
  return std::forward_as_tuple(a.video_id, a.action_class, b.confidence, a.proposal_id) <
         std::forward_as_tuple(b.video_id, b.action_class, a.confidence, b.proposal_id);
}

std::vector<ScoredDetection> nms_3d(std::span<const ScoredDetection> dets,
                                    const NmsParams& params) {
  params.validate();
  std::vector<ScoredDetection> sorted(dets.begin(), dets.end());
  std::sort(sorted.begin(), sorted.end(), nms_rank_less);

  std::vector<ScoredDetection> out;
  std::vector<double> s_iou, t_iou;
  std::vector<char> removed;
  std::size_t begin = 0;
  while (begin < sorted.size()) {
    std::size_t end = begin;
    while (end < sorted.size() && sorted[end].video_id == sorted[begin].video_id &&
           sorted[end].action_class == sorted[begin].action_class) {
      ++end;
    }
    const std::span<const ScoredDetection> group(sorted.data() + begin, end - begin);
    CuboidColumns columns;
    for (const auto& d : group) columns.push_back(d.cuboid);
    s_iou.resize(group.size());
    t_iou.resize(group.size());
    removed.assign(group.size(), 0);

    for (std::size_t i = 0; i < group.size(); ++i) {
      if (removed[i]) continue;
      out.push_back(group[i]);
      columns.spatial_iou(group[i].cuboid, s_iou);
      columns.temporal_iou(group[i].cuboid, t_iou);
      for (std::size_t j = i + 1; j < group.size(); ++j) {
        if (t_iou[j] > params.temporal_iou_thresh && s_iou[j] > params.spatial_iou_thresh) {
          removed[j] = 1;
        }
      }
    }
    begin = end;
  }
  return out;
}

}  // namespace actdet
