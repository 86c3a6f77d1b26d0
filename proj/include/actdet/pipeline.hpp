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

// End-to-end stages behind the command-line subcommands. The pure stage
// functions take in-memory inputs; the cmd_* wrappers read the files named in
// a PipelineConfig, write their artefacts and print a short summary.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "actdet/config.hpp"
#include "actdet/labeling.hpp"
#include "actdet/nms.hpp"
#include "actdet/scoring.hpp"

namespace actdet {

/// Clustering followed by jittering for every video in `meta` that has
/// detections. Videos run on up to `jobs` threads; output order is the
/// video id order regardless. When `clustering_only` is given it receives the
/// proposals before jittering.
ProposalsByVideo propose(const DetectionsByVideo& dets, const VideoMetaMap& meta,
                         const ClusterParams& cluster, const JitterParams& jitter, int jobs = 1,
                         ProposalsByVideo* clustering_only = nullptr);

struct LabelOutput {
  std::vector<LabeledProposal> labeled;
  std::vector<TrainingSample> training;
};

LabelOutput label(const ProposalsByVideo& proposals, const GroundTruthByVideo& gts,
                  const LabelSet& labels, const LabelThresholds& thresholds,
                  bool strict_balance = false);

struct FinalizeOptions {
  NmsParams nms;
  bool multi_label = false;
  double multi_label_floor = 0.1;
};

struct FinalizeStats {
  std::size_t scored = 0;
  std::size_t unscored = 0;
  std::size_t non_action = 0;
  std::size_t refinement_fallbacks = 0;
  std::size_t before_nms = 0;
  std::size_t after_nms = 0;
};

/// Joins proposals with classifier scores, keeps action classes, applies the
/// temporal refinement (clamped to the video) and runs 3D NMS. A score for an
/// unknown proposal is a ValidationError; proposals without scores are
/// skipped.
std::vector<ScoredDetection> finalize(const ProposalsByVideo& proposals, const ScoreMap& scores,
                                      const VideoMetaMap& meta, const FinalizeOptions& options,
                                      FinalizeStats* stats = nullptr);

double total_minutes(const VideoMetaMap& meta);

void write_final_detections(std::ostream& out, const std::vector<ScoredDetection>& dets,
                            const LabelSet& labels);
std::vector<ScoredDetection> read_final_detections(std::istream& in, const LabelSet& labels,
                                                   std::string_view source = "<stream>");

void write_labels(std::ostream& out, const std::vector<LabeledProposal>& labeled,
                  const LabelSet& labels);
void write_training(std::ostream& out, const std::vector<TrainingSample>& training,
                    const LabelSet& labels);

/// Machine-readable evaluation report.
std::string report_to_json(const EvaluationReport& report);
/// Plain two-column (rate_fa p_miss) text for plotting.
std::string curve_to_columns(const DetCurve& curve);

// Subcommands. Each returns normally on success and throws ValidationError or
// IoError otherwise.

void cmd_propose(const PipelineConfig& config, std::ostream& log);
void cmd_label(const PipelineConfig& config, std::ostream& log);
void cmd_finalize(const PipelineConfig& config, std::ostream& log);
void cmd_score(const PipelineConfig& config, std::ostream& log);
/// Writes a gnuplot script plotting the curve files produced by cmd_score.
void cmd_plot(const PipelineConfig& config, std::ostream& log);

}  // namespace actdet
