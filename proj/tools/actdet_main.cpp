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

// actdet command-line driver.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "actdet/config.hpp"
#include "actdet/errors.hpp"
#include "actdet/pipeline.hpp"
#include "actdet/refine.hpp"
#include "actdet/synth.hpp"

namespace {

using actdet::PipelineConfig;
using json = nlohmann::ordered_json;

struct CommonOptions {
  std::string config;
  std::string output;
  std::optional<int> jobs;
  std::string detections, ground_truth, scores, metadata, proposals, final_detections;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "JSON configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--output", o.output, "Output directory");
  cmd->add_option("--jobs", o.jobs, "Videos processed concurrently")->check(CLI::PositiveNumber);
  cmd->add_option("--detections", o.detections, "Object detections (JSONL)");
  cmd->add_option("--ground-truth", o.ground_truth, "Ground-truth actions (JSONL)");
  cmd->add_option("--scores", o.scores, "Classifier scores (JSONL)");
  cmd->add_option("--metadata", o.metadata, "Video metadata (JSONL)");
  cmd->add_option("--proposals", o.proposals, "Proposal file (default OUTPUT/proposals.jsonl)");
  cmd->add_option("--final-detections", o.final_detections,
                  "Final detections (default OUTPUT/final_detections.jsonl)");
}

PipelineConfig resolve(const CommonOptions& o) {
  PipelineConfig c = o.config.empty() ? PipelineConfig{} : actdet::load_config(o.config);
  if (!o.output.empty()) c.output_dir = o.output;
  if (o.jobs) c.jobs = *o.jobs;
  if (!o.detections.empty()) c.detections = o.detections;
  if (!o.ground_truth.empty()) c.ground_truth = o.ground_truth;
  if (!o.scores.empty()) c.scores = o.scores;
  if (!o.metadata.empty()) c.metadata = o.metadata;
  if (!o.proposals.empty()) c.proposals = o.proposals;
  if (!o.final_detections.empty()) c.final_detections = o.final_detections;
  return c;
}

template <typename T>
void override_with(const std::optional<T>& v, T& target) {
  if (v) target = *v;
}

struct ProposeOptions {
  std::optional<std::string> linkage;
  std::optional<double> temporal_scale, k_ratio, confidence_floor;
  std::optional<int> min_cluster_size, stride, min_span;
  std::optional<std::vector<int>> half_windows;
  std::optional<bool> per_class;
};

struct LabelOptions {
  std::optional<double> positive_spatial, positive_temporal, negative_temporal, hard_temporal_low;
  std::optional<bool> strict_balance;
};

struct FinalizeCliOptions {
  std::optional<double> nms_temporal, nms_spatial, multi_label_floor;
  std::optional<bool> multi_label;
};

struct ScoreOptions {
  std::optional<double> match_temporal, match_spatial;
  std::optional<std::vector<double>> rates, recall_grid;
  std::optional<std::string> recall_iou;
};

struct SynthOptions {
  std::string scenario = "clean";
  std::uint64_t seed = 1;
  std::optional<int> videos, frames, actors;
};

struct LossOptions {
  std::vector<double> probs;
  int true_class = 0;
  std::vector<double> v, r;
  std::optional<double> lambda;
  std::string batch;
};

json loss_record(const std::vector<double>& probs, int a, const std::vector<double>& v,
                 const std::vector<double>& r, double lambda) {
  if ((!v.empty() && v.size() != 2) || (!r.empty() && r.size() != 2)) {
    throw actdet::ValidationError("loss-oracle: v and r need exactly two values each");
  }
  const actdet::LossParams params{lambda, static_cast<int>(probs.size()) - 1};
  params.validate();
  const actdet::TemporalPair vp = v.empty() ? actdet::TemporalPair{} : actdet::TemporalPair{v[0], v[1]};
  std::optional<actdet::TemporalPair> rp;
  if (!r.empty()) rp = actdet::TemporalPair{r[0], r[1]};
  json out;
  out["cross_entropy"] = actdet::cross_entropy(probs, a);
  if (a >= 1 && rp) out["localization"] = actdet::localization_loss(vp, *rp);
  out["total"] = actdet::full_loss(probs, a, vp, rp, params);
  return out;
}

void run_loss_oracle(const LossOptions& o, const PipelineConfig& config) {
  const double lambda = o.lambda.value_or(config.loss.lambda);
  if (o.batch.empty()) {
    if (o.probs.empty()) throw actdet::ValidationError("loss-oracle: give --probs or --batch");
    std::cout << loss_record(o.probs, o.true_class, o.v, o.r, lambda).dump() << '\n';
    return;
  }
  std::ifstream file;
  std::istream* in = &std::cin;
  if (o.batch != "-") {
    file = actdet::open_input(o.batch);
    in = &file;
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(*in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = o.batch + ":" + std::to_string(line_no) + ": ";
    try {
      const json rec = json::parse(line);
      const auto probs = rec.at("probs").get<std::vector<double>>();
      const int a = rec.at("class").get<int>();
      std::vector<double> v, r;
      if (rec.contains("v")) v = rec.at("v").get<std::vector<double>>();
      if (rec.contains("r")) r = rec.at("r").get<std::vector<double>>();
      std::cout << loss_record(probs, a, v, r, lambda).dump() << '\n';
    } catch (const json::exception& e) {
      throw actdet::ValidationError(where + e.what());
    } catch (const actdet::ValidationError& e) {
      throw actdet::ValidationError(where + e.what());
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatio-temporal action detection pipeline: proposals, labeling, refinement, "
               "NMS and DET scoring."};
  app.require_subcommand(1);

  CommonOptions common;
  ProposeOptions po;
  LabelOptions lo;
  FinalizeCliOptions fo;
  ScoreOptions so;
  SynthOptions syo;
  LossOptions loo;

  auto* propose = app.add_subcommand("propose", "Cluster detections and jitter into proposals");
  add_common(propose, common);
  propose->add_option("--linkage", po.linkage, "ward, average, single or complete");
  propose->add_option("--temporal-scale", po.temporal_scale, "Weight of the frame axis");
  propose->add_option("--k-ratio", po.k_ratio, "Clusters per frame");
  propose->add_option("--min-cluster-size", po.min_cluster_size, "Smallest cluster kept");
  propose->add_option("--per-class", po.per_class, "Cluster each object class separately");
  propose->add_option("--confidence-floor", po.confidence_floor, "Drop detections below this");
  propose->add_option("--stride", po.stride, "Jitter anchor stride in frames");
  propose->add_option("--half-windows", po.half_windows, "Jitter half-window lengths");
  propose->add_option("--min-span", po.min_span, "Shortest jittered proposal in frames");

  auto* label = app.add_subcommand("label", "Designate proposals and build the training set");
  add_common(label, common);
  label->add_option("--positive-spatial", lo.positive_spatial, "Spatial IoU for positives");
  label->add_option("--positive-temporal", lo.positive_temporal, "Temporal IoU for positives");
  label->add_option("--negative-temporal", lo.negative_temporal, "Temporal IoU bound for negatives");
  label->add_option("--hard-temporal-low", lo.hard_temporal_low, "Lower edge of the hard band");
  label->add_option("--strict-balance", lo.strict_balance, "Require a positive for every class");

  auto* finalize = app.add_subcommand("finalize", "Apply scores, refinement and 3D NMS");
  add_common(finalize, common);
  finalize->add_option("--nms-temporal", fo.nms_temporal, "NMS temporal IoU threshold");
  finalize->add_option("--nms-spatial", fo.nms_spatial, "NMS spatial IoU threshold");
  finalize->add_option("--multi-label", fo.multi_label, "Emit every class above the floor");
  finalize->add_option("--multi-label-floor", fo.multi_label_floor, "Floor for --multi-label");

  auto* score = app.add_subcommand("score", "DET curves and mean P_miss at fixed false-alarm rates");
  add_common(score, common);
  score->add_option("--match-temporal", so.match_temporal, "Congruence temporal IoU");
  score->add_option("--match-spatial", so.match_spatial, "Congruence spatial IoU");
  score->add_option("--rates", so.rates, "Rate_FA grid (per minute)");
  score->add_option("--recall-iou", so.recall_iou, "volume3d or spatial_temporal");
  score->add_option("--recall-grid", so.recall_grid, "IoU thresholds for proposal recall");

  auto* plot = app.add_subcommand("plot", "Write a gnuplot script for the exported curves");
  add_common(plot, common);

  auto* synth = app.add_subcommand("synth", "Generate a synthetic fixture directory");
  add_common(synth, common);
  synth->add_option("--scenario", syo.scenario, "clean or noisy")
      ->check(CLI::IsMember({"clean", "noisy"}));
  synth->add_option("--seed", syo.seed, "Random seed");
  synth->add_option("--videos", syo.videos, "Number of videos");
  synth->add_option("--frames", syo.frames, "Frames per video");
  synth->add_option("--actors", syo.actors, "Actors per video");

  auto* loss = app.add_subcommand("loss-oracle", "Reference loss values for trainer validation");
  add_common(loss, common);
  loss->add_option("--probs", loo.probs, "Class probabilities, index 0 = no action");
  loss->add_option("--class", loo.true_class, "True class index");
  loss->add_option("--v", loo.v, "Predicted refinement (start end)")->expected(2);
  loss->add_option("--r", loo.r, "Target refinement (start end)")->expected(2);
  loss->add_option("--lambda", loo.lambda, "Localisation weight");
  loss->add_option("--batch", loo.batch, "JSONL of {probs, class, v, r}; '-' for stdin");

  CLI11_PARSE(app, argc, argv);

  try {
    PipelineConfig c = resolve(common);
    if (propose->parsed()) {
      override_with(po.temporal_scale, c.cluster.temporal_scale);
      override_with(po.k_ratio, c.cluster.k_ratio);
      override_with(po.min_cluster_size, c.cluster.min_cluster_size);
      override_with(po.per_class, c.cluster.per_class);
      override_with(po.confidence_floor, c.filter.confidence_floor);
      override_with(po.stride, c.jitter.stride);
      override_with(po.half_windows, c.jitter.half_windows);
      override_with(po.min_span, c.jitter.min_span);
      if (po.linkage) c.cluster.linkage = actdet::parse_linkage(*po.linkage);
      actdet::cmd_propose(c, std::cout);
    } else if (label->parsed()) {
      override_with(lo.positive_spatial, c.labeling.positive_spatial);
      override_with(lo.positive_temporal, c.labeling.positive_temporal);
      override_with(lo.negative_temporal, c.labeling.negative_temporal);
      override_with(lo.hard_temporal_low, c.labeling.hard_temporal_low);
      override_with(lo.strict_balance, c.strict_balance);
      actdet::cmd_label(c, std::cout);
    } else if (finalize->parsed()) {
      override_with(fo.nms_temporal, c.nms.temporal_iou_thresh);
      override_with(fo.nms_spatial, c.nms.spatial_iou_thresh);
      override_with(fo.multi_label, c.multi_label);
      override_with(fo.multi_label_floor, c.multi_label_floor);
      actdet::cmd_finalize(c, std::cout);
    } else if (score->parsed()) {
      override_with(so.match_temporal, c.match.temporal_iou);
      override_with(so.match_spatial, c.match.spatial_iou);
      override_with(so.rates, c.rates);
      override_with(so.recall_grid, c.recall_grid);
      if (so.recall_iou) c.recall_iou = actdet::parse_iou_mode(*so.recall_iou);
      actdet::cmd_score(c, std::cout);
    } else if (plot->parsed()) {
      actdet::cmd_plot(c, std::cout);
    } else if (synth->parsed()) {
      if (common.config.empty()) {
        const auto out = c.output_dir;
        c = actdet::synth_config();
        c.output_dir = out;
        override_with(common.jobs, c.jobs);
      }
      auto params = actdet::SynthParams::scenario(syo.scenario);
      params.seed = syo.seed;
      override_with(syo.videos, params.num_videos);
      override_with(syo.frames, params.num_frames);
      override_with(syo.actors, params.actors_per_video);
      c.validate();
      actdet::write_synth_fixture(c.output_dir, params, c);
      std::cout << "wrote " << syo.scenario << " fixture (" << params.num_videos
                << " videos, seed " << params.seed << ") to " << c.output_dir.string() << '\n';
    } else if (loss->parsed()) {
      run_loss_oracle(loo, c);
    }
  } catch (const actdet::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const actdet::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
