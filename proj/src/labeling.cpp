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

#include "actdet/labeling.hpp"

#include <algorithm>
#include <string>

#include "actdet/errors.hpp"

namespace actdet {

std::string_view to_string(Designation d) {
  switch (d) {
    case Designation::positive:
      return "positive";
    case Designation::easy_negative:
      return "easy_negative";
    case Designation::hard_negative:
      return "hard_negative";
    case Designation::discarded:
      return "discarded";
  }
  return "discarded";
}

Designation parse_designation(std::string_view name) {
  for (Designation d : {Designation::positive, Designation::easy_negative,
                        Designation::hard_negative, Designation::discarded}) {
    if (to_string(d) == name) return d;
  }
  throw ValidationError("unknown designation '" + std::string(name) + "'");
}

void LabelThresholds::validate() const {
  for (double v : {positive_spatial, positive_temporal, negative_temporal, hard_temporal_low}) {
    if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("labeling thresholds must lie in [0, 1]");
  }
  if (hard_temporal_low > negative_temporal) {
    throw ValidationError("hard_temporal_low must not exceed negative_temporal");
  }
}

namespace {

LabeledProposal decide(const Proposal& p, std::span<const GroundTruthAction> gts,
                       std::span<const double> s_iou, std::span<const double> t_iou,
                       const LabelSet& labels, const LabelThresholds& th) {
  LabeledProposal out;
  out.proposal = p;

  std::optional<std::size_t> best;
  double max_temporal = 0.0;
  for (std::size_t k = 0; k < gts.size(); ++k) {
    max_temporal = std::max(max_temporal, t_iou[k]);
    if (!(s_iou[k] > th.positive_spatial)) continue;
    if (!best || t_iou[k] > t_iou[*best] ||
        (t_iou[k] == t_iou[*best] && s_iou[k] > s_iou[*best])) {
      best = k;
    }
  }

  if (best && t_iou[*best] > th.positive_temporal) {
    const auto& gt = gts[*best];
    const auto cls = labels.index_of(gt.action_class);
    if (!cls) throw ValidationError("ground truth class '" + gt.action_class + "' not in label set");
    out.designation = Designation::positive;
    out.action_class = *cls;
    out.matched_gt = best;
    out.regression_target = regression_target(p.cuboid, gt.cuboid);
    return out;
  }

  if (max_temporal < th.negative_temporal) {
    out.designation = Designation::easy_negative;
    for (std::size_t k = 0; k < gts.size(); ++k) {
      if (s_iou[k] > th.positive_spatial && t_iou[k] > th.hard_temporal_low &&
          t_iou[k] < th.negative_temporal) {
        out.designation = Designation::hard_negative;
        out.matched_gt = k;
        break;
      }
    }
    return out;
  }

  out.designation = Designation::discarded;
  return out;
}

}  // namespace

LabeledProposal designate(const Proposal& p, std::span<const GroundTruthAction> gts,
                          const LabelSet& labels, const LabelThresholds& thresholds) {
  return label_proposals(std::span(&p, 1), gts, labels, thresholds).front();
}

std::vector<LabeledProposal> label_proposals(std::span<const Proposal> proposals,
                                             std::span<const GroundTruthAction> gts,
                                             const LabelSet& labels,
                                             const LabelThresholds& thresholds) {
  thresholds.validate();
  CuboidColumns columns;
  for (const auto& g : gts) columns.push_back(g.cuboid);
  std::vector<double> s_iou(gts.size()), t_iou(gts.size());

  std::vector<LabeledProposal> out;
  out.reserve(proposals.size());
  for (const auto& p : proposals) {
    columns.spatial_iou(p.cuboid, s_iou);
    columns.temporal_iou(p.cuboid, t_iou);
    out.push_back(decide(p, gts, s_iou, t_iou, labels, thresholds));
  }
  return out;
}

std::vector<LabeledProposal> select_training_set(std::span<const LabeledProposal> labeled) {
  std::vector<LabeledProposal> out;
  for (const auto& l : labeled) {
    switch (l.designation) {
      case Designation::positive:
      case Designation::hard_negative:
        out.push_back(l);
        break;
      case Designation::easy_negative:
        if (l.proposal.provenance == Provenance::clustering) out.push_back(l);
        break;
      case Designation::discarded:
        break;
    }
  }
  return out;
}

std::vector<TrainingSample> balance_classes(std::span<const LabeledProposal> training,
                                            std::span<const int> required_classes,
                                            const LabelSet* labels) {
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < training.size(); ++i) {
    if (training[i].designation == Designation::positive) {
      by_class[training[i].action_class].push_back(i);
    }
  }

  std::string missing;
  for (int cls : required_classes) {
    if (by_class.count(cls) == 0) {
      if (!missing.empty()) missing += ", ";
      missing += labels ? labels->name(cls) : std::to_string(cls);
    }
  }
  if (!missing.empty()) {
    throw ValidationError("cannot balance classes without positives: " + missing);
  }

  std::vector<TrainingSample> out;
  out.reserve(training.size());
  for (const auto& t : training) out.push_back({t, 0});

  std::size_t target = 0;
  for (const auto& [cls, members] : by_class) target = std::max(target, members.size());
  for (const auto& [cls, members] : by_class) {
    for (std::size_t m = members.size(); m < target; ++m) {
      const std::size_t src = members[m % members.size()];
      out.push_back({training[src], static_cast<int>(m / members.size())});
    }
  }
  return out;
}

std::map<Designation, std::size_t> count_designations(std::span<const LabeledProposal> labeled) {
  std::map<Designation, std::size_t> counts{{Designation::positive, 0},
                                            {Designation::easy_negative, 0},
                                            {Designation::hard_negative, 0},
                                            {Designation::discarded, 0}};
  for (const auto& l : labeled) ++counts[l.designation];
  return counts;
}

}  // namespace actdet
