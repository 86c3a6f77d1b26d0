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

#include "actdet/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "actdet/errors.hpp"
#include "actdet/hungarian.hpp"

namespace actdet {

void MatchParams::validate() const {
  if (!(temporal_iou >= 0.0 && temporal_iou <= 1.0) || !(spatial_iou >= 0.0 && spatial_iou <= 1.0)) {
    throw ValidationError("matching thresholds must lie in [0, 1]");
  }
}

bool congruent(const ScoredDetection& det, const GroundTruthAction& gt, const LabelSet& labels,
               const MatchParams& params) {
  if (det.video_id != gt.video_id) return false;
  const auto cls = labels.index_of(gt.action_class);
  if (!cls || *cls != det.action_class) return false;
  return temporal_iou(det.cuboid, gt.cuboid) >= params.temporal_iou &&
         spatial_iou(det.cuboid, gt.cuboid) >= params.spatial_iou;
}

Assignment hungarian_match(std::span<const ScoredDetection> dets,
                           std::span<const GroundTruthAction> gts, const LabelSet& labels,
                           const MatchParams& params) {
  params.validate();
  Assignment out;
  if (dets.empty() || gts.empty()) return out;

  // Weight bonus larger than any achievable IoU sum: more pairs always wins.
  const double bonus = static_cast<double>(std::min(dets.size(), gts.size())) + 1.0;
  std::vector<std::vector<double>> weights(dets.size(), std::vector<double>(gts.size(), 0.0));
  std::vector<std::vector<double>> t_iou(dets.size(), std::vector<double>(gts.size(), 0.0));
  bool any = false;
  for (std::size_t d = 0; d < dets.size(); ++d) {
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (!congruent(dets[d], gts[g], labels, params)) continue;
      t_iou[d][g] = temporal_iou(dets[d].cuboid, gts[g].cuboid);
      weights[d][g] = bonus + t_iou[d][g];
      any = true;
    }
  }
  if (!any) return out;

  const auto assignment = max_weight_assignment(weights);
  for (std::size_t d = 0; d < dets.size(); ++d) {
    const int g = assignment[d];
    if (g < 0 || weights[d][static_cast<std::size_t>(g)] == 0.0) continue;
    out.pairs.emplace_back(d, static_cast<std::size_t>(g));
    out.temporal_iou_sum += t_iou[d][static_cast<std::size_t>(g)];
  }
  return out;
}

namespace {

// Index lists per video so matching never spans videos.
std::map<std::string, std::vector<std::size_t>> group_by_video(
    std::span<const GroundTruthAction> gts) {
  std::map<std::string, std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < gts.size(); ++i) out[gts[i].video_id].push_back(i);
  return out;
}

void lower_envelope(std::vector<DetPoint>& points) {
  std::stable_sort(points.begin(), points.end(),
                   [](const DetPoint& a, const DetPoint& b) { return a.rate_fa < b.rate_fa; });
  for (std::size_t i = 1; i < points.size(); ++i) {
    points[i].p_miss = std::min(points[i].p_miss, points[i - 1].p_miss);
  }
}

}  // namespace

DetCurve det_curve(std::span<const ScoredDetection> dets, std::span<const GroundTruthAction> gts,
                   double video_minutes, const LabelSet& labels, const MatchParams& params,
                   std::string label) {
  params.validate();
  if (!(video_minutes > 0.0)) throw ValidationError("det_curve: video_minutes must be positive");
  if (gts.empty()) throw ValidationError("det_curve: no ground truth for '" + label + "'");

  DetCurve curve;
  curve.label = std::move(label);
  const double total_gt = static_cast<double>(gts.size());
  if (dets.empty()) {
    curve.points.push_back({0.0, 1.0, std::numeric_limits<double>::quiet_NaN()});
    return curve;
  }

  std::vector<std::size_t> order(dets.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].confidence > dets[b].confidence;
  });

  const auto gt_groups = group_by_video(gts);
  std::vector<GroundTruthAction> video_gts;
  std::vector<ScoredDetection> video_dets;

  std::size_t cut = 0;
  while (cut < order.size()) {
    const double threshold = dets[order[cut]].confidence;
    while (cut < order.size() && dets[order[cut]].confidence >= threshold) ++cut;

    // Surviving detections, grouped by video.
    std::map<std::string, std::vector<std::size_t>> surviving;
    for (std::size_t i = 0; i < cut; ++i) surviving[dets[order[i]].video_id].push_back(order[i]);

    std::size_t matched = 0;
    for (const auto& [video, det_idx] : surviving) {
      const auto it = gt_groups.find(video);
      if (it == gt_groups.end()) continue;
      video_dets.clear();
      video_gts.clear();
      for (std::size_t i : det_idx) video_dets.push_back(dets[i]);
      for (std::size_t g : it->second) video_gts.push_back(gts[g]);
      matched += hungarian_match(video_dets, video_gts, labels, params).pairs.size();
    }
    const double false_alarms = static_cast<double>(cut - matched);
    curve.points.push_back(
        {false_alarms / video_minutes, (total_gt - static_cast<double>(matched)) / total_gt, threshold});
  }
  lower_envelope(curve.points);
  return curve;
}

std::vector<double> mean_pmiss_at(const DetCurve& curve, std::span<const double> rates) {
  std::vector<double> out;
  out.reserve(rates.size());
  for (double r : rates) {
    if (r < 0.0) throw ValidationError("mean_pmiss_at: negative rate");
    double p = 1.0;
    for (const auto& pt : curve.points) {
      if (pt.rate_fa <= r) p = pt.p_miss;
      else break;
    }
    out.push_back(p);
  }
  return out;
}

EvaluationReport evaluate(std::span<const ScoredDetection> dets,
                          std::span<const GroundTruthAction> gts, double video_minutes,
                          const LabelSet& labels, const MatchParams& params,
                          std::span<const double> rates) {
  EvaluationReport report;
  report.rates.assign(rates.begin(), rates.end());
  report.video_minutes = video_minutes;

  std::map<int, std::vector<GroundTruthAction>> gt_by_class;
  for (const auto& g : gts) {
    const auto cls = labels.index_of(g.action_class);
    if (!cls) throw ValidationError("unknown ground-truth class '" + g.action_class + "'");
    gt_by_class[*cls].push_back(g);
  }
  std::map<int, std::vector<ScoredDetection>> det_by_class;
  for (const auto& d : dets) det_by_class[d.action_class].push_back(d);

  for (const auto& [cls, list] : det_by_class) {
    if (gt_by_class.count(cls) == 0) {
      report.warnings.push_back("class '" + labels.name(cls) + "' has " +
                                std::to_string(list.size()) +
                                " detections but no ground truth; omitted from aggregate");
    }
  }

  std::set<double> grid;
  for (const auto& [cls, class_gts] : gt_by_class) {
    const auto dit = det_by_class.find(cls);
    const std::span<const ScoredDetection> class_dets =
        dit == det_by_class.end() ? std::span<const ScoredDetection>{} : dit->second;
    ClassReport cr;
    cr.label = labels.name(cls);
    cr.num_gt = class_gts.size();
    cr.num_detections = class_dets.size();
    cr.curve = det_curve(class_dets, class_gts, video_minutes, labels, params, cr.label);
    cr.pmiss_at = mean_pmiss_at(cr.curve, rates);
    for (const auto& p : cr.curve.points) grid.insert(p.rate_fa);
    report.classes.push_back(std::move(cr));
  }

  report.aggregate.label = "aggregate";
  if (!report.classes.empty()) {
    for (double r : grid) {
      double sum = 0.0;
      for (const auto& cr : report.classes) sum += mean_pmiss_at(cr.curve, std::span(&r, 1))[0];
      report.aggregate.points.push_back(
          {r, sum / static_cast<double>(report.classes.size()),
           std::numeric_limits<double>::quiet_NaN()});
    }
  }
  report.aggregate_pmiss_at = mean_pmiss_at(report.aggregate, rates);
  return report;
}

std::string_view to_string(IouMode mode) {
  return mode == IouMode::volume3d ? "volume3d" : "spatial_temporal";
}

IouMode parse_iou_mode(std::string_view name) {
  if (name == "volume3d") return IouMode::volume3d;
  if (name == "spatial_temporal") return IouMode::spatial_temporal;
  throw ValidationError("unknown IoU mode '" + std::string(name) +
                        "'; expected volume3d or spatial_temporal");
}

std::vector<double> recall_curve(const ProposalsByVideo& proposals, const GroundTruthByVideo& gts,
                                 IouMode mode, std::span<const double> grid) {
  std::vector<double> best;
  std::vector<double> a, b;
  for (const auto& [video, list] : gts) {
    const auto pit = proposals.find(video);
    CuboidColumns columns;
    if (pit != proposals.end()) {
      for (const auto& p : pit->second) columns.push_back(p.cuboid);
    }
    a.resize(columns.size());
    b.resize(columns.size());
    for (const auto& g : list) {
      double top = 0.0;
      if (mode == IouMode::volume3d) {
        columns.iou_3d(g.cuboid, a);
        for (double v : a) top = std::max(top, v);
      } else {
        columns.spatial_iou(g.cuboid, a);
        columns.temporal_iou(g.cuboid, b);
        for (std::size_t k = 0; k < a.size(); ++k) top = std::max(top, a[k] * b[k]);
      }
      best.push_back(top);
    }
  }
  if (best.empty()) throw ValidationError("recall_curve: no ground truth");

  std::vector<double> out;
  out.reserve(grid.size());
  for (double theta : grid) {
    const auto hit = std::count_if(best.begin(), best.end(), [&](double v) { return v >= theta; });
    out.push_back(static_cast<double>(hit) / static_cast<double>(best.size()));
  }
  return out;
}

}  // namespace actdet
