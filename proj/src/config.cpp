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

#include "actdet/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "actdet/errors.hpp"
#include "jsonl.hpp"

namespace actdet {

using jsonl::json;

std::filesystem::path PipelineConfig::proposals_path() const {
  return proposals.empty() ? output_dir / "proposals.jsonl" : proposals;
}

std::filesystem::path PipelineConfig::final_detections_path() const {
  return final_detections.empty() ? output_dir / "final_detections.jsonl" : final_detections;
}

void PipelineConfig::validate() const {
  if (labels.size() == 0) throw ValidationError("label set must not be empty");
  if (!(filter.confidence_floor >= 0.0 && filter.confidence_floor <= 1.0)) {
    throw ValidationError("confidence_floor must lie in [0, 1]");
  }
  cluster.validate();
  jitter.validate();
  labeling.validate();
  loss.validate();
  if (static_cast<std::size_t>(loss.num_classes) != labels.size()) {
    throw ValidationError("loss.num_classes (" + std::to_string(loss.num_classes) +
                          ") must equal the number of labels (" + std::to_string(labels.size()) + ")");
  }
  nms.validate();
  if (!(multi_label_floor >= 0.0 && multi_label_floor <= 1.0)) {
    throw ValidationError("multi_label_floor must lie in [0, 1]");
  }
  match.validate();
  for (double r : rates) {
    if (!(r >= 0.0)) throw ValidationError("rates must be non-negative");
  }
  for (double t : recall_grid) {
    if (!(t >= 0.0 && t <= 1.0)) throw ValidationError("recall_grid values must lie in [0, 1]");
  }
  if (jobs < 1) throw ValidationError("jobs must be at least 1");
}

namespace {

// Rejects keys outside `allowed` so typos do not silently fall back to
// defaults.
void check_keys(const json& obj, const char* where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ValidationError(std::string("config: '") + where + "' must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!ok.count(key)) {
      throw ValidationError(std::string("config: unknown key '") + key + "' in '" + where + "'");
    }
  }
}

template <typename T>
void take(const json& obj, const char* key, T& out, const char* where) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->template get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: bad value for '") + where + "." + key + "': " + e.what());
  }
}

void take_path(const json& obj, const char* key, std::filesystem::path& out,
               const std::filesystem::path& base) {
  std::string s;
  take(obj, key, s, "paths");
  if (s.empty()) return;
  std::filesystem::path p(s);
  out = (p.is_relative() && !base.empty()) ? base / p : p;
}

}  // namespace

PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: malformed JSON: ") + e.what());
  }
  check_keys(root, "<root>", {"paths", "labels", "ingest", "cluster", "jitter", "labeling", "loss",
                              "nms", "match", "score", "jobs"});
  PipelineConfig c;

  if (const auto it = root.find("paths"); it != root.end()) {
    const json& p = *it;
    check_keys(p, "paths", {"detections", "ground_truth", "scores", "metadata", "proposals",
                            "final_detections", "output_dir"});
    take_path(p, "detections", c.detections, base_dir);
    take_path(p, "ground_truth", c.ground_truth, base_dir);
    take_path(p, "scores", c.scores, base_dir);
    take_path(p, "metadata", c.metadata, base_dir);
    take_path(p, "proposals", c.proposals, base_dir);
    take_path(p, "final_detections", c.final_detections, base_dir);
    take_path(p, "output_dir", c.output_dir, base_dir);
  }
  if (const auto it = root.find("labels"); it != root.end()) {
    std::vector<std::string> names;
    take(root, "labels", names, "labels");
    c.labels = LabelSet(std::move(names));
  }
  if (const auto it = root.find("ingest"); it != root.end()) {
    check_keys(*it, "ingest", {"confidence_floor", "object_classes"});
    take(*it, "confidence_floor", c.filter.confidence_floor, "ingest");
    take(*it, "object_classes", c.filter.object_classes, "ingest");
  }
  if (const auto it = root.find("cluster"); it != root.end()) {
    check_keys(*it, "cluster", {"linkage", "temporal_scale", "k_ratio", "min_cluster_size", "per_class"});
    std::string linkage{to_string(c.cluster.linkage)};
    take(*it, "linkage", linkage, "cluster");
    c.cluster.linkage = parse_linkage(linkage);
    take(*it, "temporal_scale", c.cluster.temporal_scale, "cluster");
    take(*it, "k_ratio", c.cluster.k_ratio, "cluster");
    take(*it, "min_cluster_size", c.cluster.min_cluster_size, "cluster");
    take(*it, "per_class", c.cluster.per_class, "cluster");
  }
  if (const auto it = root.find("jitter"); it != root.end()) {
    check_keys(*it, "jitter", {"stride", "half_windows", "clamp_to_video", "min_span", "include_endpoint"});
    take(*it, "stride", c.jitter.stride, "jitter");
    take(*it, "half_windows", c.jitter.half_windows, "jitter");
    take(*it, "clamp_to_video", c.jitter.clamp_to_video, "jitter");
    take(*it, "min_span", c.jitter.min_span, "jitter");
    take(*it, "include_endpoint", c.jitter.include_endpoint, "jitter");
  }
  if (const auto it = root.find("labeling"); it != root.end()) {
    check_keys(*it, "labeling", {"positive_spatial", "positive_temporal", "negative_temporal",
                                 "hard_temporal_low", "strict_balance"});
    take(*it, "positive_spatial", c.labeling.positive_spatial, "labeling");
    take(*it, "positive_temporal", c.labeling.positive_temporal, "labeling");
    take(*it, "negative_temporal", c.labeling.negative_temporal, "labeling");
    take(*it, "hard_temporal_low", c.labeling.hard_temporal_low, "labeling");
    take(*it, "strict_balance", c.strict_balance, "labeling");
  }
  if (const auto it = root.find("loss"); it != root.end()) {
    check_keys(*it, "loss", {"lambda", "num_classes"});
    take(*it, "lambda", c.loss.lambda, "loss");
    take(*it, "num_classes", c.loss.num_classes, "loss");
  } else {
    c.loss.num_classes = static_cast<int>(c.labels.size());
  }
  if (const auto it = root.find("nms"); it != root.end()) {
    check_keys(*it, "nms", {"temporal_iou", "spatial_iou", "multi_label", "multi_label_floor"});
    take(*it, "temporal_iou", c.nms.temporal_iou_thresh, "nms");
    take(*it, "spatial_iou", c.nms.spatial_iou_thresh, "nms");
    take(*it, "multi_label", c.multi_label, "nms");
    take(*it, "multi_label_floor", c.multi_label_floor, "nms");
  }
  if (const auto it = root.find("match"); it != root.end()) {
    check_keys(*it, "match", {"temporal_iou", "spatial_iou"});
    take(*it, "temporal_iou", c.match.temporal_iou, "match");
    take(*it, "spatial_iou", c.match.spatial_iou, "match");
  }
  if (const auto it = root.find("score"); it != root.end()) {
    check_keys(*it, "score", {"rates", "recall_iou", "recall_grid"});
    take(*it, "rates", c.rates, "score");
    std::string mode{to_string(c.recall_iou)};
    take(*it, "recall_iou", mode, "score");
    c.recall_iou = parse_iou_mode(mode);
    take(*it, "recall_grid", c.recall_grid, "score");
  }
  take(root, "jobs", c.jobs, "<root>");
  c.validate();
  return c;
}

std::string serialize_config(const PipelineConfig& c) {
  json root;
  json& paths = root["paths"];
  paths["detections"] = c.detections.string();
  paths["ground_truth"] = c.ground_truth.string();
  paths["scores"] = c.scores.string();
  paths["metadata"] = c.metadata.string();
  paths["proposals"] = c.proposals.string();
  paths["final_detections"] = c.final_detections.string();
  paths["output_dir"] = c.output_dir.string();
  root["labels"] = c.labels.names();
  root["ingest"] = {{"confidence_floor", c.filter.confidence_floor},
                    {"object_classes", c.filter.object_classes}};
  root["cluster"] = {{"linkage", std::string(to_string(c.cluster.linkage))},
                     {"temporal_scale", c.cluster.temporal_scale},
                     {"k_ratio", c.cluster.k_ratio},
                     {"min_cluster_size", c.cluster.min_cluster_size},
                     {"per_class", c.cluster.per_class}};
  root["jitter"] = {{"stride", c.jitter.stride},
                    {"half_windows", c.jitter.half_windows},
                    {"clamp_to_video", c.jitter.clamp_to_video},
                    {"min_span", c.jitter.min_span},
                    {"include_endpoint", c.jitter.include_endpoint}};
  root["labeling"] = {{"positive_spatial", c.labeling.positive_spatial},
                      {"positive_temporal", c.labeling.positive_temporal},
                      {"negative_temporal", c.labeling.negative_temporal},
                      {"hard_temporal_low", c.labeling.hard_temporal_low},
                      {"strict_balance", c.strict_balance}};
  root["loss"] = {{"lambda", c.loss.lambda}, {"num_classes", c.loss.num_classes}};
  root["nms"] = {{"temporal_iou", c.nms.temporal_iou_thresh},
                 {"spatial_iou", c.nms.spatial_iou_thresh},
                 {"multi_label", c.multi_label},
                 {"multi_label_floor", c.multi_label_floor}};
  root["match"] = {{"temporal_iou", c.match.temporal_iou}, {"spatial_iou", c.match.spatial_iou}};
  root["score"] = {{"rates", c.rates},
                   {"recall_iou", std::string(to_string(c.recall_iou))},
                   {"recall_grid", c.recall_grid}};
  root["jobs"] = c.jobs;
  return root.dump(2) + "\n";
}

PipelineConfig load_config(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

}  // namespace actdet
