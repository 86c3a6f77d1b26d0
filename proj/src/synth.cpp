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

#include "actdet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <tuple>

#include "actdet/errors.hpp"
#include "actdet/geometry.hpp"
#include "actdet/pipeline.hpp"

namespace actdet {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(uniform() * static_cast<double>(hi - lo + 1));
  }
  double normal(double sigma) {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

struct ActorKind {
  std::string object_class;
  double w, h;
  std::vector<std::string> actions;
};

std::vector<ActorKind> actor_kinds(const LabelSet& labels) {
  ActorKind person{"person", 40, 100, {}};
  ActorKind vehicle{"vehicle", 150, 80, {}};
  for (const auto& name : labels.names()) {
    (name.rfind("vehicle_", 0) == 0 ? vehicle : person).actions.push_back(name);
  }
  std::vector<ActorKind> kinds;
  if (!person.actions.empty()) kinds.push_back(person);
  if (!vehicle.actions.empty()) kinds.push_back(vehicle);
  return kinds;
}

std::string video_name(int i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "synth%03d", i);
  return buf;
}

}  // namespace

SynthParams SynthParams::scenario(std::string_view name) {
  SynthParams p;
  if (name == "clean") return p;
  if (name == "noisy") {
    p.box_noise = 6.0;
    p.size_noise = 0.1;
    p.confidence_min = 0.3;
    p.confidence_max = 1.0;
    p.false_positive_rate = 0.05;
    return p;
  }
  throw ValidationError("unknown synthetic scenario '" + std::string(name) +
                        "' (expected clean or noisy)");
}

void SynthParams::validate() const {
  if (num_videos < 1 || num_frames < 1 || frame_rate <= 0 || width < 1 || height < 1) {
    throw ValidationError("synth: video shape must be positive");
  }
  if (actors_per_video < 1 || detection_stride < 1) {
    throw ValidationError("synth: actors_per_video and detection_stride must be >= 1");
  }
  if (move_min < 1 || move_max < move_min || act_min < 1 || act_max < act_min) {
    throw ValidationError("synth: phase lengths must satisfy 1 <= min <= max");
  }
  if (speed_min < 0 || speed_max < speed_min || box_noise < 0 || size_noise < 0 ||
      size_noise >= 1 || false_positive_rate < 0 || false_positive_rate > 1) {
    throw ValidationError("synth: noise parameters out of range");
  }
  if (confidence_min < 0 || confidence_max > 1 || confidence_max < confidence_min) {
    throw ValidationError("synth: confidence range must lie in [0, 1]");
  }
}

PipelineConfig synth_config() {
  PipelineConfig c;
  c.cluster.k_ratio = 0.08;
  return c;
}

SynthData synthesize(const SynthParams& params, const LabelSet& labels) {
  params.validate();
  const auto kinds = actor_kinds(labels);
  if (kinds.empty()) throw ValidationError("synth: label set is empty");
  Rng rng(params.seed);
  SynthData data;
  const double lane_h = static_cast<double>(params.height) / params.actors_per_video;

  for (int v = 0; v < params.num_videos; ++v) {
    const std::string vid = video_name(v);
    data.meta[vid] = {vid, params.num_frames, params.frame_rate, params.width, params.height};
    auto& dets = data.detections[vid];
    auto& gts = data.ground_truth[vid];

    for (int a = 0; a < params.actors_per_video; ++a) {
      const ActorKind& kind = kinds[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(kinds.size()) - 1))];
      const double cy = lane_h * (a + 0.5);
      double cx = rng.uniform(kind.w, params.width - kind.w);
      std::vector<double> xs(static_cast<std::size_t>(params.num_frames));
      bool acting = rng.uniform() < 0.5;
      int f = 0;
      while (f < params.num_frames) {
        const int remaining = params.num_frames - f;
        if (acting && remaining >= params.act_min) {
          const int len = std::min(rng.uniform_int(params.act_min, params.act_max), remaining);
          const std::string& cls =
              kind.actions[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(kind.actions.size()) - 1))];
          gts.push_back({vid, cls,
                         {cx - kind.w / 2, cy - kind.h / 2, cx + kind.w / 2, cy + kind.h / 2, f,
                          f + len - 1}});
          for (int i = 0; i < len; ++i) xs[static_cast<std::size_t>(f + i)] = cx;
          f += len;
        } else {
          const int len = std::min(rng.uniform_int(params.move_min, params.move_max), remaining);
          double speed = rng.uniform(params.speed_min, params.speed_max);
          if (rng.uniform() < 0.5) speed = -speed;
          for (int i = 0; i < len; ++i) {
            cx += speed;
            const double lo = kind.w / 2, hi = params.width - kind.w / 2;
            if (cx < lo || cx > hi) {
              speed = -speed;
              cx = std::clamp(cx, lo, hi);
            }
            xs[static_cast<std::size_t>(f + i)] = cx;
          }
          f += len;
        }
        acting = !acting;
      }

      for (int fr = 0; fr < params.num_frames; fr += params.detection_stride) {
        const double x = xs[static_cast<std::size_t>(fr)] + rng.normal(params.box_noise);
        const double y = cy + rng.normal(params.box_noise);
        const double w = kind.w * (1.0 + rng.uniform(-params.size_noise, params.size_noise));
        const double h = kind.h * (1.0 + rng.uniform(-params.size_noise, params.size_noise));
        Detection d{vid, fr, kind.object_class, x - w / 2, y - h / 2, x + w / 2, y + h / 2,
                    rng.uniform(params.confidence_min, params.confidence_max)};
        d.x_min = std::clamp(d.x_min, 0.0, double(params.width));
        d.x_max = std::clamp(d.x_max, 0.0, double(params.width));
        d.y_min = std::clamp(d.y_min, 0.0, double(params.height));
        d.y_max = std::clamp(d.y_max, 0.0, double(params.height));
        dets.push_back(d);

        if (rng.uniform() < params.false_positive_rate) {
          const ActorKind& fk = kinds[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(kinds.size()) - 1))];
          const double fx = rng.uniform(fk.w / 2, params.width - fk.w / 2);
          const double fy = rng.uniform(fk.h / 2, params.height - fk.h / 2);
          dets.push_back({vid, fr, fk.object_class, fx - fk.w / 2, fy - fk.h / 2, fx + fk.w / 2,
                          fy + fk.h / 2, rng.uniform(0.5, 1.0)});
        }
      }
    }
    std::sort(gts.begin(), gts.end(), [](const GroundTruthAction& l, const GroundTruthAction& r) {
      if (l.cuboid != r.cuboid) return canonical_less(l.cuboid, r.cuboid);
      return l.action_class < r.action_class;
    });
    std::sort(dets.begin(), dets.end(), [](const Detection& l, const Detection& r) {
      return std::tie(l.frame, l.object_class, l.x_min, l.y_min, l.x_max, l.y_max, l.confidence) <
             std::tie(r.frame, r.object_class, r.x_min, r.y_min, r.x_max, r.y_max, r.confidence);
    });
  }
  return data;
}

ScoreMap oracle_scores(const ProposalsByVideo& proposals, const GroundTruthByVideo& gts,
                       const LabelSet& labels, const LabelThresholds& thresholds) {
  const std::size_t k = labels.size();
  ScoreMap out;
  const std::vector<GroundTruthAction> none;
  for (const auto& [video, list] : proposals) {
    const auto it = gts.find(video);
    const auto& video_gts = it == gts.end() ? none : it->second;
    for (const auto& l : label_proposals(list, video_gts, labels, thresholds)) {
      ScoreRecord s;
      s.proposal_id = l.proposal.id;
      s.class_scores.assign(k + 1, 0.0);
      if (l.designation == Designation::positive) {
        const Cuboid& g = video_gts[*l.matched_gt].cuboid;
        const double p =
            0.5 + 0.45 * spatial_iou(l.proposal.cuboid, g) * temporal_iou(l.proposal.cuboid, g);
        s.class_scores[static_cast<std::size_t>(l.action_class)] = p;
        s.class_scores[0] = 1.0 - p;
        s.v_st = l.regression_target->start;
        s.v_end = l.regression_target->end;
      } else {
        s.class_scores[0] = 0.9;
        for (std::size_t a = 1; a <= k; ++a) s.class_scores[a] = 0.1 / static_cast<double>(k);
      }
      out.emplace(s.proposal_id, std::move(s));
    }
  }
  return out;
}

void write_synth_fixture(const std::filesystem::path& dir, const SynthParams& params,
                         PipelineConfig config) {
  const SynthData data = synthesize(params, config.labels);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());

  auto write = [&](const char* name, auto&& fn) {
    auto out = open_output(dir / name);
    fn(out);
    if (!out) throw IoError("failed writing '" + (dir / name).string() + "'");
  };
  std::ostringstream det_text;
  write_detections(det_text, data.detections);
  write("detections.jsonl", [&](std::ostream& o) { o << det_text.str(); });
  write("ground_truth.jsonl", [&](std::ostream& o) { write_ground_truth(o, data.ground_truth); });
  write("metadata.jsonl", [&](std::ostream& o) { write_video_meta(o, data.meta); });

  std::istringstream det_in(det_text.str());
  const auto filtered = read_detections(det_in, config.filter, &data.meta);
  const auto proposals = propose(filtered, data.meta, config.cluster, config.jitter, config.jobs);
  const auto scores = oracle_scores(proposals, data.ground_truth, config.labels, config.labeling);
  write("scores.jsonl", [&](std::ostream& o) { write_scores(o, scores); });

  config.detections = "detections.jsonl";
  config.ground_truth = "ground_truth.jsonl";
  config.metadata = "metadata.jsonl";
  config.scores = "scores.jsonl";
  config.proposals.clear();
  config.final_detections.clear();
  config.output_dir = ".";
  write("config.json", [&](std::ostream& o) { o << serialize_config(config); });
}

}  // namespace actdet
