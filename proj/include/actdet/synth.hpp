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

// Synthetic surveillance fixtures: actors that alternate between moving and
// performing a stationary action, with detector output, ground truth, video
// metadata and oracle classifier scores.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "actdet/config.hpp"
#include "actdet/ingest.hpp"
#include "actdet/labeling.hpp"

namespace actdet {

struct SynthParams {
  int num_videos = 10;
  int num_frames = 900;
  double frame_rate = 30.0;
  int width = 1280;
  int height = 720;
  int actors_per_video = 3;
  /// A detection is emitted on every detection_stride-th frame.
  int detection_stride = 2;
  int move_min = 40, move_max = 100;
  int act_min = 48, act_max = 240;
  double speed_min = 4.0, speed_max = 8.0;
  /// Standard deviation of the box centre noise in pixels.
  double box_noise = 0.0;
  /// Relative half-range of the box size noise.
  double size_noise = 0.0;
  double confidence_min = 0.9, confidence_max = 0.9;
  /// Expected number of spurious detections per actor and detected frame.
  double false_positive_rate = 0.0;
  std::uint64_t seed = 1;

  /// "clean" or "noisy".
  static SynthParams scenario(std::string_view name);
  void validate() const;
};

struct SynthData {
  VideoMetaMap meta;
  DetectionsByVideo detections;
  GroundTruthByVideo ground_truth;
};

/// Pipeline defaults with the cluster density raised to match the fixture,
/// which packs more action segments per frame than real surveillance video.
PipelineConfig synth_config();

/// Deterministic for a given parameter set and label vocabulary. Vehicle
/// actors draw classes whose name starts with "vehicle_", people draw the rest.
SynthData synthesize(const SynthParams& params, const LabelSet& labels);

/// Scores a perfect classifier would emit: positives get their ground-truth
/// class with probability 0.5 + 0.45 * spatial IoU * temporal IoU and the exact
/// regression target; everything else is confidently non-action.
ScoreMap oracle_scores(const ProposalsByVideo& proposals, const GroundTruthByVideo& gts,
                       const LabelSet& labels, const LabelThresholds& thresholds);

/// Writes detections, ground truth, metadata, oracle scores and a config.json
/// pointing at them into `dir`. Scores are computed from the proposals the
/// given configuration produces.
void write_synth_fixture(const std::filesystem::path& dir, const SynthParams& params,
                         PipelineConfig config);

}  // namespace actdet
