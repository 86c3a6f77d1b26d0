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

#include <span>
#include <string>
#include <vector>

#include "actdet/geometry.hpp"

namespace actdet {

/// A classified, refined proposal.
struct ScoredDetection {
  std::string video_id;
  std::string proposal_id;
  Cuboid cuboid;
  /// 1-based action class.
  int action_class = 1;
  double confidence = 0;

  friend bool operator==(const ScoredDetection&, const ScoredDetection&) = default;
};

struct NmsParams {
  double temporal_iou_thresh = 0.2;
  double spatial_iou_thresh = 0.05;

  void validate() const;

  friend bool operator==(const NmsParams&, const NmsParams&) = default;
};

/// Orders by video, class, confidence descending, then proposal id.
bool nms_rank_less(const ScoredDetection& a, const ScoredDetection& b);

/// Greedy suppression run separately for every (video, class). A detection is
/// removed when a kept one of higher rank overlaps it with temporal IoU above
/// temporal_iou_thresh AND spatial IoU above spatial_iou_thresh. Survivors are
/// returned in nms_rank_less order.
std::vector<ScoredDetection> nms_3d(std::span<const ScoredDetection> dets, const NmsParams& params);

}  // namespace actdet
