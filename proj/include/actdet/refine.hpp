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

// Classifier-side math: the training losses, application of predicted
// temporal refinements, and fixed-length frame sampling.

#include <optional>
#include <span>
#include <vector>

#include "actdet/geometry.hpp"

namespace actdet {

/// Normalised temporal offsets of a cuboid's start and end frames relative to
/// its mid-frame, in units of its half-length. Used both for regression
/// targets (r) and network outputs (v).
struct TemporalPair {
  double start = 0;
  double end = 0;

  friend bool operator==(const TemporalPair&, const TemporalPair&) = default;
};

struct LossParams {
  /// Weight of the localisation term.
  double lambda = 0.25;
  /// Action classes; probability vectors carry num_classes + 1 entries.
  int num_classes = 12;

  void validate() const;

  friend bool operator==(const LossParams&, const LossParams&) = default;
};

/// Probabilities below this are clamped before taking the log.
inline constexpr double kProbabilityFloor = 1e-12;

/// -log(p[true_class]). Throws ValidationError when probs is not a
/// distribution (tolerance 1e-6) or the class is out of range.
double cross_entropy(std::span<const double> probs, int true_class);

/// 0.5 x^2 when |x| < 1, |x| - 0.5 otherwise.
double smooth_l1(double x);

double localization_loss(TemporalPair v, TemporalPair r);

/// Cross-entropy plus lambda * localisation for action classes (a >= 1); the
/// cross-entropy alone for the non-action class. `r` is required iff a >= 1.
double full_loss(std::span<const double> probs, int true_class, TemporalPair v,
                 std::optional<TemporalPair> r, const LossParams& params);

/// Start/end of `gt` expressed relative to proposal `p`.
TemporalPair regression_target(const Cuboid& p, const Cuboid& gt);

struct Refinement {
  Cuboid cuboid;
  /// The predicted bounds were degenerate and the input bounds were kept.
  bool fell_back = false;
};

/// New bounds mid + v * half_length, rounded to the nearest frame. When the
/// continuous refined span (end - start) is under one frame, including
/// inverted bounds, the original bounds are returned with fell_back set.
Refinement apply_refinement(const Cuboid& p, TemporalPair v);

/// n frame indices spread uniformly over [f_st, f_end], endpoints included,
/// repeating frames when the span is shorter than n.
std::vector<int> sample_frames(int f_st, int f_end, int n = 64);

}  // namespace actdet
