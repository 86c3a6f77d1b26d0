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

#include "actdet/refine.hpp"

#include <cmath>
#include <string>

#include "actdet/errors.hpp"

namespace actdet {

void LossParams::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ValidationError("lambda must be >= 0");
  if (num_classes < 1) throw ValidationError("num_classes must be at least 1");
}

double cross_entropy(std::span<const double> probs, int true_class) {
  if (true_class < 0 || static_cast<std::size_t>(true_class) >= probs.size()) {
    throw ValidationError("cross_entropy: class " + std::to_string(true_class) +
                          " outside probability vector of size " + std::to_string(probs.size()));
  }
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw ValidationError("cross_entropy: negative or NaN probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw ValidationError("cross_entropy: probabilities sum to " + std::to_string(sum));
  }
  const double p = probs[static_cast<std::size_t>(true_class)];
  return -std::log(p < kProbabilityFloor ? kProbabilityFloor : p);
}

double smooth_l1(double x) {
  const double ax = std::abs(x);
  return ax < 1.0 ? 0.5 * x * x : ax - 0.5;
}

double localization_loss(TemporalPair v, TemporalPair r) {
  return smooth_l1(r.start - v.start) + smooth_l1(r.end - v.end);
}

double full_loss(std::span<const double> probs, int true_class, TemporalPair v,
                 std::optional<TemporalPair> r, const LossParams& params) {
  params.validate();
  const double cls = cross_entropy(probs, true_class);
  if (true_class == 0) return cls;
  if (!r) throw ValidationError("full_loss: regression target required for action classes");
  return cls + params.lambda * localization_loss(v, *r);
}

TemporalPair regression_target(const Cuboid& p, const Cuboid& gt) {
  const double mid = p.mid_frame();
  const double half = p.half_length();
  return {(gt.f_start - mid) / half, (gt.f_end - mid) / half};
}

Refinement apply_refinement(const Cuboid& p, TemporalPair v) {
  const double mid = p.mid_frame();
  const double half = p.half_length();
  const double start = mid + v.start * half;
  const double end = mid + v.end * half;
  if (!(end - start >= 1.0) || !std::isfinite(start) || !std::isfinite(end)) {
    return {p, true};
  }
  Cuboid out = p;
  out.f_start = static_cast<int>(std::lround(start));
  out.f_end = static_cast<int>(std::lround(end));
  return {out, false};
}

std::vector<int> sample_frames(int f_st, int f_end, int n) {
  if (f_st > f_end) throw ValidationError("sample_frames: f_st > f_end");
  if (n < 1) throw ValidationError("sample_frames: n must be at least 1");
  std::vector<int> out(static_cast<std::size_t>(n), f_st);
  if (n == 1) return out;
  const long long span = static_cast<long long>(f_end) - f_st;  // L - 1
  const long long denom = n - 1;
  for (long long i = 0; i < n; ++i) {
    // round(i * span / denom) with halves rounded up, in exact integers
    const long long offset = (2 * i * span + denom) / (2 * denom);
    out[static_cast<std::size_t>(i)] = static_cast<int>(f_st + offset);
  }
  return out;
}

}  // namespace actdet
