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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "actdet/clustering.hpp"
#include "actdet/ingest.hpp"
#include "actdet/jitter.hpp"
#include "actdet/labeling.hpp"
#include "actdet/nms.hpp"
#include "actdet/refine.hpp"
#include "actdet/scoring.hpp"

namespace actdet {

struct PipelineConfig {
  // Inputs and outputs. Empty proposals / final_detections paths default to
  // files inside output_dir.
  std::filesystem::path detections;
  std::filesystem::path ground_truth;
  std::filesystem::path scores;
  std::filesystem::path metadata;
  std::filesystem::path proposals;
  std::filesystem::path final_detections;
  std::filesystem::path output_dir{"."};

  LabelSet labels = LabelSet::diva();
  DetectionFilter filter;
  ClusterParams cluster;
  JitterParams jitter;
  LabelThresholds labeling;
  /// Require a positive for every configured class when balancing.
  bool strict_balance = false;
  LossParams loss;
  NmsParams nms;
  /// Emit every action class whose probability reaches multi_label_floor
  /// instead of the argmax class only.
  bool multi_label = false;
  double multi_label_floor = 0.1;
  MatchParams match;
  std::vector<double> rates = kDefaultRates;
  IouMode recall_iou = IouMode::volume3d;
  std::vector<double> recall_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  int jobs = 1;

  std::filesystem::path proposals_path() const;
  std::filesystem::path final_detections_path() const;

  /// Checks every parameter block; throws ValidationError.
  void validate() const;

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

/// Parses a JSON configuration. Missing keys keep their defaults; unknown keys
/// are rejected. Relative paths are resolved against `base_dir` when given.
PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
std::string serialize_config(const PipelineConfig& config);
/// Reads and parses a file, resolving relative paths against its directory.
PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace actdet
