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
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "actdet/ingest.hpp"
#include "actdet/proposal.hpp"
#include "actdet/refine.hpp"

namespace actdet {

enum class Designation { positive, easy_negative, hard_negative, discarded };

std::string_view to_string(Designation d);
Designation parse_designation(std::string_view name);

struct LabelThresholds {
  /// Positive: spatial IoU > positive_spatial and temporal IoU > positive_temporal.
  double positive_spatial = 0.35;
  double positive_temporal = 0.5;
  /// Negative: temporal IoU < negative_temporal against every ground truth.
  double negative_temporal = 0.2;
  /// Hard negative: some ground truth with spatial IoU > positive_spatial and
  /// temporal IoU strictly inside (hard_temporal_low, negative_temporal).
  double hard_temporal_low = 0.01;

  void validate() const;

  friend bool operator==(const LabelThresholds&, const LabelThresholds&) = default;
};

struct LabeledProposal {
  Proposal proposal;
  Designation designation = Designation::discarded;
  /// 1-based class index for positives, 0 otherwise.
  int action_class = 0;
  /// Index into the ground-truth list the designation was decided against.
  std::optional<std::size_t> matched_gt;
  /// Present iff designation is positive.
  std::optional<TemporalPair> regression_target;
};

/// Labels one proposal against the ground truth of its video.
///
/// The best match is the ground truth with the largest temporal IoU among
/// those with spatial IoU above positive_spatial (ties: larger spatial IoU,
/// then lower index). Proposals that are neither positive nor negative, e.g.
/// temporal IoU in [0.2, 0.5] or high temporal overlap with too little
/// spatial overlap, are discarded.
LabeledProposal designate(const Proposal& p, std::span<const GroundTruthAction> gts,
                          const LabelSet& labels, const LabelThresholds& thresholds);

/// Batched designate() for proposals of one video.
std::vector<LabeledProposal> label_proposals(std::span<const Proposal> proposals,
                                             std::span<const GroundTruthAction> gts,
                                             const LabelSet& labels,
                                             const LabelThresholds& thresholds);

/// Positives, hard negatives, and easy negatives that came from clustering.
std::vector<LabeledProposal> select_training_set(std::span<const LabeledProposal> labeled);

struct TrainingSample {
  LabeledProposal sample;
  /// 0 for the original, 1.. for class-balancing duplicates.
  int copy = 0;
};

/// Duplicates positives until every represented class has as many as the
/// largest one. Duplicates cycle through each class's instances in order and
/// are appended after the input, grouped by class index. Classes listed in
/// `required_classes` must have at least one positive; otherwise
/// ValidationError names the missing classes.
std::vector<TrainingSample> balance_classes(std::span<const LabeledProposal> training,
                                            std::span<const int> required_classes = {},
                                            const LabelSet* labels = nullptr);

/// Count per designation.
std::map<Designation, std::size_t> count_designations(std::span<const LabeledProposal> labeled);

}  // namespace actdet
