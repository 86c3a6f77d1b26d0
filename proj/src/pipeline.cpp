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

#include "actdet/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <mutex>
#include <thread>

#include "actdet/clustering.hpp"
#include "actdet/errors.hpp"
#include "actdet/jitter.hpp"
#include "actdet/refine.hpp"
#include "jsonl.hpp"

namespace actdet {

using jsonl::json;

namespace {

// Runs fn(i) for i in [0, n) on up to `jobs` threads.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(precision) << v;
  return s.str();
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

ProposalsByVideo propose(const DetectionsByVideo& dets, const VideoMetaMap& meta,
                         const ClusterParams& cluster, const JitterParams& jitter, int jobs,
                         ProposalsByVideo* clustering_only) {
  cluster.validate();
  jitter.validate();
  for (const auto& [video, list] : dets) {
    if (!meta.count(video)) throw ValidationError("no metadata for video '" + video + "'");
  }
  std::vector<const VideoMeta*> videos;
  for (const auto& [video, m] : meta) {
    if (dets.count(video)) videos.push_back(&m);
  }

  std::vector<std::vector<Proposal>> clustered(videos.size()), dense(videos.size());
  parallel_for(videos.size(), jobs, [&](std::size_t i) {
    const VideoMeta& m = *videos[i];
    clustered[i] = cluster_video(dets.at(m.video_id), m, cluster);
    dense[i] = jitter_proposals(clustered[i], jitter, m);
  });

  ProposalsByVideo out;
  for (std::size_t i = 0; i < videos.size(); ++i) {
    if (clustering_only) (*clustering_only)[videos[i]->video_id] = clustered[i];
    out[videos[i]->video_id] = std::move(dense[i]);
  }
  return out;
}

LabelOutput label(const ProposalsByVideo& proposals, const GroundTruthByVideo& gts,
                  const LabelSet& labels, const LabelThresholds& thresholds, bool strict_balance) {
  LabelOutput out;
  const std::vector<GroundTruthAction> none;
  for (const auto& [video, list] : proposals) {
    const auto it = gts.find(video);
    auto labeled = label_proposals(list, it == gts.end() ? none : it->second, labels, thresholds);
    out.labeled.insert(out.labeled.end(), std::make_move_iterator(labeled.begin()),
                       std::make_move_iterator(labeled.end()));
  }
  const auto training = select_training_set(out.labeled);
  std::vector<int> required;
  if (strict_balance) {
    for (int c = 1; c <= static_cast<int>(labels.size()); ++c) required.push_back(c);
  }
  out.training = balance_classes(training, required, &labels);
  return out;
}

std::vector<ScoredDetection> finalize(const ProposalsByVideo& proposals, const ScoreMap& scores,
                                      const VideoMetaMap& meta, const FinalizeOptions& options,
                                      FinalizeStats* stats) {
  options.nms.validate();
  FinalizeStats local;
  FinalizeStats& st = stats ? *stats : local;
  st = {};

  std::map<std::string, const Proposal*> by_id;
  for (const auto& [video, list] : proposals) {
    for (const auto& p : list) by_id.emplace(p.id, &p);
  }
  for (const auto& [id, s] : scores) {
    if (!by_id.count(id)) throw ValidationError("scores reference unknown proposal '" + id + "'");
  }

  std::vector<ScoredDetection> candidates;
  for (const auto& [id, proposal] : by_id) {
    const auto sit = scores.find(id);
    if (sit == scores.end()) {
      ++st.unscored;
      continue;
    }
    ++st.scored;
    const ScoreRecord& s = sit->second;
    const auto mit = meta.find(proposal->video_id);
    if (mit == meta.end()) {
      throw ValidationError("no metadata for video '" + proposal->video_id + "'");
    }

    std::vector<int> classes;
    if (options.multi_label) {
      for (std::size_t a = 1; a < s.class_scores.size(); ++a) {
        if (s.class_scores[a] >= options.multi_label_floor) classes.push_back(static_cast<int>(a));
      }
    } else {
      const auto best = std::max_element(s.class_scores.begin(), s.class_scores.end());
      const int a = static_cast<int>(best - s.class_scores.begin());
      if (a != 0) classes.push_back(a);
    }
    if (classes.empty()) {
      ++st.non_action;
      continue;
    }

    Refinement r = apply_refinement(proposal->cuboid, {s.v_st, s.v_end});
    Cuboid c = r.cuboid;
    c.f_start = std::max(c.f_start, 0);
    c.f_end = std::min(c.f_end, mit->second.num_frames - 1);
    if (c.f_start > c.f_end) {
      c = proposal->cuboid;
      r.fell_back = true;
    }
    if (r.fell_back) ++st.refinement_fallbacks;
    for (int a : classes) {
      candidates.push_back({proposal->video_id, proposal->id, c, a,
                            s.class_scores[static_cast<std::size_t>(a)]});
    }
  }
  st.before_nms = candidates.size();
  auto kept = nms_3d(candidates, options.nms);
  st.after_nms = kept.size();
  return kept;
}

double total_minutes(const VideoMetaMap& meta) {
  double total = 0.0;
  for (const auto& [id, m] : meta) total += m.minutes();
  return total;
}

void write_final_detections(std::ostream& out, const std::vector<ScoredDetection>& dets,
                            const LabelSet& labels) {
  for (const auto& d : dets) {
    json r;
    r["video_id"] = d.video_id;
    r["proposal_id"] = d.proposal_id;
    r["action_class"] = labels.name(d.action_class);
    r["confidence"] = d.confidence;
    r["x_min"] = d.cuboid.x_min;
    r["y_min"] = d.cuboid.y_min;
    r["x_max"] = d.cuboid.x_max;
    r["y_max"] = d.cuboid.y_max;
    r["f_start"] = d.cuboid.f_start;
    r["f_end"] = d.cuboid.f_end;
    jsonl::write_record(out, r);
  }
}

std::vector<ScoredDetection> read_final_detections(std::istream& in, const LabelSet& labels,
                                                   std::string_view source) {
  std::vector<ScoredDetection> out;
  jsonl::for_each_record(in, source, [&](const json& r, const jsonl::Location& loc) {
    ScoredDetection d;
    d.video_id = jsonl::get_string(r, "video_id", loc);
    d.proposal_id = jsonl::get_string(r, "proposal_id", loc);
    const std::string cls = jsonl::get_string(r, "action_class", loc);
    const auto idx = labels.index_of(cls);
    if (!idx) throw ValidationError(loc.prefix() + "unknown action class '" + cls + "'");
    d.action_class = *idx;
    d.confidence = jsonl::get_number(r, "confidence", loc);
    if (d.confidence < 0.0 || d.confidence > 1.0) {
      throw ValidationError(loc.prefix() + "confidence outside [0, 1]");
    }
    d.cuboid.x_min = jsonl::get_number(r, "x_min", loc);
    d.cuboid.y_min = jsonl::get_number(r, "y_min", loc);
    d.cuboid.x_max = jsonl::get_number(r, "x_max", loc);
    d.cuboid.y_max = jsonl::get_number(r, "y_max", loc);
    d.cuboid.f_start = jsonl::get_int(r, "f_start", loc);
    d.cuboid.f_end = jsonl::get_int(r, "f_end", loc);
    if (!d.cuboid.valid()) throw ValidationError(loc.prefix() + "invalid cuboid");
    out.push_back(std::move(d));
  });
  return out;
}

namespace {

json labeled_record(const LabeledProposal& l, const LabelSet& labels) {
  json r;
  r["proposal_id"] = l.proposal.id;
  r["video_id"] = l.proposal.video_id;
  r["provenance"] = std::string(to_string(l.proposal.provenance));
  r["designation"] = std::string(to_string(l.designation));
  r["class"] = l.designation == Designation::positive ? json(labels.name(l.action_class)) : json(nullptr);
  r["r_st"] = l.regression_target ? json(l.regression_target->start) : json(nullptr);
  r["r_end"] = l.regression_target ? json(l.regression_target->end) : json(nullptr);
  return r;
}

}  // namespace

void write_labels(std::ostream& out, const std::vector<LabeledProposal>& labeled,
                  const LabelSet& labels) {
  for (const auto& l : labeled) jsonl::write_record(out, labeled_record(l, labels));
}

void write_training(std::ostream& out, const std::vector<TrainingSample>& training,
                    const LabelSet& labels) {
  for (const auto& t : training) {
    json r = labeled_record(t.sample, labels);
    r["copy"] = t.copy;
    jsonl::write_record(out, r);
  }
}

namespace {

json curve_json(const DetCurve& curve) {
  json pts = json::array();
  for (const auto& p : curve.points) {
    pts.push_back({{"rate_fa", p.rate_fa}, {"p_miss", p.p_miss}, {"threshold", number_or_null(p.threshold)}});
  }
  return pts;
}

}  // namespace

std::string report_to_json(const EvaluationReport& report) {
  json root;
  root["rates"] = report.rates;
  root["video_minutes"] = report.video_minutes;
  root["aggregate"] = {{"pmiss_at", report.aggregate_pmiss_at}, {"points", curve_json(report.aggregate)}};
  json classes = json::array();
  for (const auto& c : report.classes) {
    classes.push_back({{"class", c.label},
                       {"num_gt", c.num_gt},
                       {"num_detections", c.num_detections},
                       {"pmiss_at", c.pmiss_at},
                       {"points", curve_json(c.curve)}});
  }
  root["classes"] = classes;
  root["warnings"] = report.warnings;
  return root.dump(2) + "\n";
}

std::string curve_to_columns(const DetCurve& curve) {
  std::ostringstream out;
  out << "# " << curve.label << "\n# rate_fa p_miss\n";
  out << std::setprecision(10);
  for (const auto& p : curve.points) out << p.rate_fa << ' ' << p.p_miss << '\n';
  return out.str();
}

namespace {

void require(const std::filesystem::path& p, const char* what) {
  if (p.empty()) throw ValidationError(std::string("config: no ") + what + " path given");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = open_output(path);
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

void cmd_propose(const PipelineConfig& config, std::ostream& log) {
  config.validate();
  require(config.detections, "detections");
  require(config.metadata, "metadata");
  const auto meta = load_video_meta(config.metadata);
  const auto dets = load_detections(config.detections, config.filter, &meta);
  ProposalsByVideo clustered;
  const auto proposals = propose(dets, meta, config.cluster, config.jitter, config.jobs, &clustered);

  std::ostringstream text;
  write_proposals(text, proposals);
  write_text(config.proposals_path(), text.str());

  log << "video\tdetections\tclustering\ttotal\n";
  std::size_t total = 0;
  for (const auto& [video, list] : proposals) {
    log << video << '\t' << dets.at(video).size() << '\t' << clustered.at(video).size() << '\t'
        << list.size() << '\n';
    total += list.size();
  }
  log << "wrote " << total << " proposals to " << config.proposals_path().string() << '\n';
}

void cmd_label(const PipelineConfig& config, std::ostream& log) {
  config.validate();
  require(config.ground_truth, "ground_truth");
  VideoMetaMap meta;
  if (!config.metadata.empty()) meta = load_video_meta(config.metadata);
  const auto gts = load_ground_truth(config.ground_truth, config.labels,
                                     config.metadata.empty() ? nullptr : &meta);
  const auto proposals = load_proposals(config.proposals_path());
  const auto out = label(proposals, gts, config.labels, config.labeling, config.strict_balance);

  std::ostringstream labels_text, training_text;
  write_labels(labels_text, out.labeled, config.labels);
  write_training(training_text, out.training, config.labels);
  write_text(config.output_dir / "labels.jsonl", labels_text.str());
  write_text(config.output_dir / "training.jsonl", training_text.str());

  const auto all = count_designations(out.labeled);
  std::vector<LabeledProposal> originals;
  for (const auto& t : out.training) {
    if (t.copy == 0) originals.push_back(t.sample);
  }
  const auto used = count_designations(originals);
  log << "designation\tall\ttraining\n";
  for (Designation d : {Designation::positive, Designation::easy_negative,
                        Designation::hard_negative, Designation::discarded}) {
    log << to_string(d) << '\t' << all.at(d) << '\t' << used.at(d) << '\n';
  }
  log << "total\t" << out.labeled.size() << '\t' << originals.size() << '\n';

  std::map<int, std::pair<std::size_t, std::size_t>> per_class;
  for (const auto& t : out.training) {
    if (t.sample.designation != Designation::positive) continue;
    auto& [orig, balanced] = per_class[t.sample.action_class];
    if (t.copy == 0) ++orig;
    ++balanced;
  }
  log << "class\tpositives\tbalanced\n";
  for (const auto& [cls, counts] : per_class) {
    log << config.labels.name(cls) << '\t' << counts.first << '\t' << counts.second << '\n';
  }
}

void cmd_finalize(const PipelineConfig& config, std::ostream& log) {
  config.validate();
  require(config.scores, "scores");
  require(config.metadata, "metadata");
  const auto meta = load_video_meta(config.metadata);
  const auto proposals = load_proposals(config.proposals_path());
  const auto scores = load_scores(config.scores, config.labels.size());
  FinalizeStats st;
  const auto dets = finalize(proposals, scores, meta,
                             {config.nms, config.multi_label, config.multi_label_floor}, &st);
  std::ostringstream text;
  write_final_detections(text, dets, config.labels);
  write_text(config.final_detections_path(), text.str());
  log << "scored " << st.scored << ", unscored " << st.unscored << ", non-action "
      << st.non_action << ", refinement fallbacks " << st.refinement_fallbacks << '\n';
  log << "detections before NMS " << st.before_nms << ", after NMS " << st.after_nms << '\n';
  log << "wrote " << config.final_detections_path().string() << '\n';
}

void cmd_score(const PipelineConfig& config, std::ostream& log) {
  config.validate();
  require(config.ground_truth, "ground_truth");
  require(config.metadata, "metadata");
  const auto meta = load_video_meta(config.metadata);
  const auto gt_map = load_ground_truth(config.ground_truth, config.labels, &meta);
  std::vector<GroundTruthAction> gts;
  for (const auto& [video, list] : gt_map) gts.insert(gts.end(), list.begin(), list.end());

  auto in = open_input(config.final_detections_path());
  const auto dets = read_final_detections(in, config.labels, config.final_detections_path().string());
  for (const auto& d : dets) {
    if (!meta.count(d.video_id)) throw ValidationError("no metadata for video '" + d.video_id + "'");
  }

  const auto report = evaluate(dets, gts, total_minutes(meta), config.labels, config.match, config.rates);
  write_text(config.output_dir / "report.json", report_to_json(report));
  for (const auto& c : report.classes) {
    write_text(config.output_dir / "curves" / (c.label + ".dat"), curve_to_columns(c.curve));
  }
  write_text(config.output_dir / "curves" / "aggregate.dat", curve_to_columns(report.aggregate));

  if (std::filesystem::exists(config.proposals_path())) {
    const auto proposals = load_proposals(config.proposals_path());
    const auto recall = recall_curve(proposals, gt_map, config.recall_iou, config.recall_grid);
    json r;
    r["iou_mode"] = std::string(to_string(config.recall_iou));
    r["grid"] = config.recall_grid;
    r["recall"] = recall;
    write_text(config.output_dir / "recall.json", r.dump(2) + "\n");
    log << "proposal recall (" << to_string(config.recall_iou) << ")";
    for (std::size_t i = 0; i < recall.size(); ++i) {
      log << ' ' << config.recall_grid[i] << ':' << fmt(recall[i], 3);
    }
    log << '\n';
  }

  for (const auto& w : report.warnings) log << "warning: " << w << '\n';
  log << "class";
  for (double r : report.rates) log << '\t' << r;
  log << '\n';
  for (const auto& c : report.classes) {
    log << c.label;
    for (double p : c.pmiss_at) log << '\t' << fmt(p, 3);
    log << '\n';
  }
  log << "mean";
  for (double p : report.aggregate_pmiss_at) log << '\t' << fmt(p, 3);
  log << '\n';
}

void cmd_plot(const PipelineConfig& config, std::ostream& log) {
  const auto curves = config.output_dir / "curves";
  if (!std::filesystem::is_directory(curves)) {
    throw IoError("no curve directory '" + curves.string() + "'; run score first");
  }
  std::vector<std::string> names;
  for (const auto& entry : std::filesystem::directory_iterator(curves)) {
    if (entry.path().extension() == ".dat") names.push_back(entry.path().stem().string());
  }
  std::sort(names.begin(), names.end());
  std::ostringstream gp;
  gp << "set logscale x\nset xlabel 'Rate_FA (false alarms per minute)'\n"
        "set ylabel 'P_miss'\nset yrange [0:1]\nset key outside right\n"
        "set terminal pngcairo size 1000,700\nset output 'det.png'\nplot \\\n";
  for (std::size_t i = 0; i < names.size(); ++i) {
    gp << "  'curves/" << names[i] << ".dat' using 1:2 with steps title '" << names[i] << "'"
       << (i + 1 < names.size() ? ", \\\n" : "\n");
  }
  write_text(config.output_dir / "det.gp", gp.str());
  log << "wrote " << (config.output_dir / "det.gp").string() << " (" << names.size()
      << " curves)\n";
}

}  // namespace actdet
