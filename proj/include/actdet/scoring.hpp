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
#include <string>
#include <utility>
#include <vector>

#include "actdet/ingest.hpp"
#include "actdet/nms.hpp"

namespace actdet {

/// When a detection may be paired with a ground-truth instance.
struct MatchParams {
  /// Minimum temporal IoU (inclusive).
  double temporal_iou = 0.2;
  /// Minimum spatial IoU (inclusive); 0 disables the spatial gate.
  double spatial_iou = 0.0;

  void validate() const;

  friend bool operator==(const MatchParams&, const MatchParams&) = default;
};

/// (detection index, ground-truth index) pairs.
struct Assignment {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  double temporal_iou_sum = 0.0;
};

/// True when the pair satisfies the congruence rule: same video, same class,
/// and both overlap gates.
bool congruent(const ScoredDetection& det, const GroundTruthAction& gt, const LabelSet& labels,
               const MatchParams& params);

/// One-to-one matching that maximises the number of pairs first and the sum
/// of temporal IoU second, over congruent pairs only.
Assignment hungarian_match(std::span<const ScoredDetection> dets,
                           std::span<const GroundTruthAction> gts, const LabelSet& labels,
                           const MatchParams& params);

struct DetPoint {
  double rate_fa;
  double p_miss;
  /// Confidence threshold that produced the point (NaN for synthetic points).
  double threshold;
};

struct DetCurve {
  std::string label;
  std::vector<DetPoint> points;
};

/// Sweeps the confidence threshold over the distinct detection scores from
/// high to low; each point reports misses over total ground truth and
/// unmatched detections per minute. With no detections the curve is the
/// single point (0, 1). Throws ValidationError when `gts` is empty or
/// video_minutes is not positive.
DetCurve det_curve(std::span<const ScoredDetection> dets, std::span<const GroundTruthAction> gts,
                   double video_minutes, const LabelSet& labels, const MatchParams& params,
                   std::string label = "aggregate");

/// Step interpolation: the miss probability of the last operating point whose
/// rate is <= the requested rate, or 1 when there is none.
std::vector<double> mean_pmiss_at(const DetCurve& curve, std::span<const double> rates);

/// Rate grid used for summaries unless overridden.
inline const std::vector<double> kDefaultRates{0.01, 0.03, 0.1, 0.15, 0.2, 1.0};

struct ClassReport {
  std::string label;
  std::size_t num_gt = 0;
  std::size_t num_detections = 0;
  DetCurve curve;
  std::vector<double> pmiss_at;
};

struct EvaluationReport {
  std::vector<double> rates;
  double video_minutes = 0;
  std::vector<ClassReport> classes;
  /// Unweighted mean over classes present in the ground truth.
  DetCurve aggregate;
  std::vector<double> aggregate_pmiss_at;
  std::vector<std::string> warnings;
};

/// Per-class DET curves for every class with ground truth, their mean, and
/// the summaries at `rates`. Classes that have detections but no ground
/// truth are left out with a warning.
EvaluationReport evaluate(std::span<const ScoredDetection> dets,
                          std::span<const GroundTruthAction> gts, double video_minutes,
                          const LabelSet& labels, const MatchParams& params,
                          std::span<const double> rates);

enum class IouMode { volume3d, spatial_temporal };

std::string_view to_string(IouMode mode);
IouMode parse_iou_mode(std::string_view name);

/// Fraction of ground-truth instances with at least one proposal of the same
/// video reaching IoU >= theta, for every theta in `grid`. Throws
/// ValidationError when there is no ground truth.
std::vector<double> recall_curve(const ProposalsByVideo& proposals, const GroundTruthByVideo& gts,
                                 IouMode mode, std::span<const double> grid);

}  // namespace actdet
