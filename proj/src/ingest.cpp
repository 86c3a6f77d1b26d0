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

#include "actdet/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <tuple>

#include "actdet/errors.hpp"
#include "jsonl.hpp"

namespace actdet {

using jsonl::json;
using jsonl::Location;

std::string_view to_string(Provenance p) {
  return p == Provenance::clustering ? "clustering" : "jittering";
}

Provenance parse_provenance(std::string_view name) {
  if (name == "clustering") return Provenance::clustering;
  if (name == "jittering") return Provenance::jittering;
  throw ValidationError("unknown provenance '" + std::string(name) + "'");
}

LabelSet::LabelSet(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    for (std::size_t j = i + 1; j < names_.size(); ++j) {
      if (names_[i] == names_[j]) throw ValidationError("duplicate action label '" + names_[i] + "'");
    }
  }
}

LabelSet LabelSet::diva() {
  return LabelSet({"vehicle_u_turn", "vehicle_turning_left", "vehicle_turning_right",
                   "closing_trunk", "opening_trunk", "loading", "unloading",
                   "transport_heavy_carry", "open", "close", "enter", "exit"});
}

std::optional<int> LabelSet::index_of(std::string_view name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<int>(it - names_.begin()) + 1;
}

const std::string& LabelSet::name(int index) const {
  if (index < 1 || static_cast<std::size_t>(index) > names_.size()) {
    throw ValidationError("class index " + std::to_string(index) + " out of range");
  }
  return names_[static_cast<std::size_t>(index) - 1];
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

namespace {

const VideoMeta* lookup(const VideoMetaMap* meta, const std::string& video_id,
                        const Location& loc) {
  if (meta == nullptr) return nullptr;
  const auto it = meta->find(video_id);
  if (it == meta->end()) {
    throw ValidationError(loc.prefix() + "video '" + video_id + "' has no metadata record");
  }
  return &it->second;
}

std::string describe(const Detection& d) {
  return "detection (" + d.video_id + ", frame " + std::to_string(d.frame) + ", " +
         d.object_class + ")";
}

bool detection_less(const Detection& a, const Detection& b) {
  return std::tie(a.frame, a.object_class, a.x_min, a.y_min, a.x_max, a.y_max, a.confidence) <
         std::tie(b.frame, b.object_class, b.x_min, b.y_min, b.x_max, b.y_max, b.confidence);
}

bool gt_less(const GroundTruthAction& a, const GroundTruthAction& b) {
  if (canonical_less(a.cuboid, b.cuboid)) return true;
  if (canonical_less(b.cuboid, a.cuboid)) return false;
  return a.action_class < b.action_class;
}

Cuboid read_box(const json& r, const Location& loc) {
  Cuboid c;
  c.x_min = jsonl::get_number(r, "x_min", loc);
  c.y_min = jsonl::get_number(r, "y_min", loc);
  c.x_max = jsonl::get_number(r, "x_max", loc);
  c.y_max = jsonl::get_number(r, "y_max", loc);
  return c;
}

void put_box(json& r, const Cuboid& c, bool with_frames) {
  r["x_min"] = c.x_min;
  r["y_min"] = c.y_min;
  r["x_max"] = c.x_max;
  r["y_max"] = c.y_max;
  if (with_frames) {
    r["f_start"] = c.f_start;
    r["f_end"] = c.f_end;
  }
}

}  // namespace

VideoMetaMap read_video_meta(std::istream& in, std::string_view source) {
  VideoMetaMap out;
  jsonl::for_each_record(in, source, [&](const json& r, const Location& loc) {
    VideoMeta m;
    m.video_id = jsonl::get_string(r, "video_id", loc);
    m.num_frames = jsonl::get_int(r, "num_frames", loc);
    m.frame_rate = jsonl::get_number(r, "frame_rate", loc);
    m.width = jsonl::get_int(r, "width", loc);
    m.height = jsonl::get_int(r, "height", loc);
    if (m.num_frames <= 0 || m.frame_rate <= 0 || m.width <= 0 || m.height <= 0) {
      throw ValidationError(loc.prefix() + "video '" + m.video_id +
                            "': num_frames, frame_rate, width and height must be positive");
    }
    if (!out.emplace(m.video_id, m).second) {
      throw ValidationError(loc.prefix() + "duplicate metadata for video '" + m.video_id + "'");
    }
  });
  return out;
}

DetectionsByVideo read_detections(std::istream& in, const DetectionFilter& filter,
                                  const VideoMetaMap* meta, std::string_view source) {
  DetectionsByVideo out;
  jsonl::for_each_record(in, source, [&](const json& r, const Location& loc) {
    Detection d;
    d.video_id = jsonl::get_string(r, "video_id", loc);
    d.frame = jsonl::get_int(r, "frame", loc);
    d.object_class = jsonl::get_string(r, "object_class", loc);
    const Cuboid box = read_box(r, loc);
    d.x_min = box.x_min;
    d.y_min = box.y_min;
    d.x_max = box.x_max;
    d.y_max = box.y_max;
    d.confidence = jsonl::get_number(r, "confidence", loc);

    if (d.frame < 0) throw ValidationError(loc.prefix() + describe(d) + ": negative frame");
    if (!(d.x_min < d.x_max && d.y_min < d.y_max)) {
      throw ValidationError(loc.prefix() + describe(d) + ": box must have positive width and height");
    }
    if (d.confidence < 0.0 || d.confidence > 1.0) {
      throw ValidationError(loc.prefix() + describe(d) + ": confidence " +
                            std::to_string(d.confidence) + " outside [0, 1]");
    }
    if (const VideoMeta* m = lookup(meta, d.video_id, loc); m && d.frame >= m->num_frames) {
      throw ValidationError(loc.prefix() + describe(d) + ": frame beyond video length " +
                            std::to_string(m->num_frames));
    }

    if (d.confidence < filter.confidence_floor) return;
    if (!filter.object_classes.empty() &&
        std::find(filter.object_classes.begin(), filter.object_classes.end(), d.object_class) ==
            filter.object_classes.end()) {
      return;
    }
    out[d.video_id].push_back(std::move(d));
  });
  for (auto& [video, dets] : out) std::sort(dets.begin(), dets.end(), detection_less);
  return out;
}

GroundTruthByVideo read_ground_truth(std::istream& in, const LabelSet& labels,
                                     const VideoMetaMap* meta, std::string_view source) {
  GroundTruthByVideo out;
  jsonl::for_each_record(in, source, [&](const json& r, const Location& loc) {
    GroundTruthAction g;
    g.video_id = jsonl::get_string(r, "video_id", loc);
    g.action_class = jsonl::get_string(r, "action_class", loc);
    g.cuboid = read_box(r, loc);
    g.cuboid.f_start = jsonl::get_int(r, "f_start", loc);
    g.cuboid.f_end = jsonl::get_int(r, "f_end", loc);
    if (!labels.index_of(g.action_class)) {
      std::string allowed;
      for (const auto& n : labels.names()) allowed += (allowed.empty() ? "" : ", ") + n;
      throw ValidationError(loc.prefix() + "unknown action class '" + g.action_class +
                            "'; allowed: " + allowed);
    }
    if (!g.cuboid.valid() || g.cuboid.f_start < 0) {
      throw ValidationError(loc.prefix() + "invalid cuboid for action '" + g.action_class + "'");
    }
    if (const VideoMeta* m = lookup(meta, g.video_id, loc)) {
      const Cuboid& c = g.cuboid;
      if (c.f_end >= m->num_frames || c.x_min < 0 || c.y_min < 0 || c.x_max > m->width ||
          c.y_max > m->height) {
        throw ValidationError(loc.prefix() + "action '" + g.action_class +
                              "' extends outside video '" + g.video_id + "'");
      }
    }
    out[g.video_id].push_back(std::move(g));
  });
  for (auto& [video, gts] : out) std::sort(gts.begin(), gts.end(), gt_less);
  return out;
}

ScoreMap read_scores(std::istream& in, std::size_t num_classes, std::string_view source) {
  ScoreMap out;
  jsonl::for_each_record(in, source, [&](const json& r, const Location& loc) {
    ScoreRecord s;
    s.proposal_id = jsonl::get_string(r, "proposal_id", loc);
    const auto& scores = jsonl::field(r, "class_scores", loc);
    if (!scores.is_array()) throw ValidationError(loc.prefix() + "class_scores must be an array");
    if (scores.size() != num_classes + 1) {
      throw ValidationError(loc.prefix() + "proposal '" + s.proposal_id + "': expected " +
                            std::to_string(num_classes + 1) + " class scores, got " +
                            std::to_string(scores.size()));
    }
    double sum = 0.0;
    for (const auto& v : scores) {
      if (!v.is_number()) throw ValidationError(loc.prefix() + "class score is not a number");
      const double p = v.get<double>();
      if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError(loc.prefix() + "proposal '" + s.proposal_id +
                              "': class score outside [0, 1]");
      }
      sum += p;
      s.class_scores.push_back(p);
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw ValidationError(loc.prefix() + "proposal '" + s.proposal_id +
                            "': class scores sum to " + std::to_string(sum));
    }
    s.v_st = jsonl::get_number(r, "v_st", loc);
    s.v_end = jsonl::get_number(r, "v_end", loc);
    const std::string id = s.proposal_id;
    if (!out.emplace(id, std::move(s)).second) {
      throw ValidationError(loc.prefix() + "duplicate proposal_id '" + id + "'");
    }
  });
  return out;
}

ProposalsByVideo read_proposals(std::istream& in, std::string_view source) {
  ProposalsByVideo out;
  jsonl::for_each_record(in, source, [&](const json& r, const Location& loc) {
    Proposal p;
    p.id = jsonl::get_string(r, "proposal_id", loc);
    p.video_id = jsonl::get_string(r, "video_id", loc);
    const auto& parent = jsonl::field(r, "parent_id", loc);
    p.parent_id = parent.is_null() ? "" : jsonl::get_string(r, "parent_id", loc);
    try {
      p.provenance = parse_provenance(jsonl::get_string(r, "provenance", loc));
    } catch (const ValidationError& e) {
      throw ValidationError(loc.prefix() + e.what());
    }
    p.cuboid = read_box(r, loc);
    p.cuboid.f_start = jsonl::get_int(r, "f_start", loc);
    p.cuboid.f_end = jsonl::get_int(r, "f_end", loc);
    if (!p.cuboid.valid()) throw ValidationError(loc.prefix() + "invalid cuboid for proposal '" + p.id + "'");
    out[p.video_id].push_back(std::move(p));
  });
  // Proposal files are written in pipeline order; that order is preserved.
  return out;
}

VideoMetaMap load_video_meta(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_video_meta(in, path.string());
}

DetectionsByVideo load_detections(const std::filesystem::path& path, const DetectionFilter& filter,
                                  const VideoMetaMap* meta) {
  auto in = open_input(path);
  return read_detections(in, filter, meta, path.string());
}

GroundTruthByVideo load_ground_truth(const std::filesystem::path& path, const LabelSet& labels,
                                     const VideoMetaMap* meta) {
  auto in = open_input(path);
  return read_ground_truth(in, labels, meta, path.string());
}

ScoreMap load_scores(const std::filesystem::path& path, std::size_t num_classes) {
  auto in = open_input(path);
  return read_scores(in, num_classes, path.string());
}

ProposalsByVideo load_proposals(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_proposals(in, path.string());
}

void write_video_meta(std::ostream& out, const VideoMetaMap& meta) {
  for (const auto& [id, m] : meta) {
    json r;
    r["video_id"] = m.video_id;
    r["num_frames"] = m.num_frames;
    r["frame_rate"] = m.frame_rate;
    r["width"] = m.width;
    r["height"] = m.height;
    jsonl::write_record(out, r);
  }
}

void write_detections(std::ostream& out, const DetectionsByVideo& dets) {
  for (const auto& [video, list] : dets) {
    for (const auto& d : list) {
      json r;
      r["video_id"] = d.video_id;
      r["frame"] = d.frame;
      r["object_class"] = d.object_class;
      put_box(r, d.cuboid(), false);
      r["confidence"] = d.confidence;
      jsonl::write_record(out, r);
    }
  }
}

void write_ground_truth(std::ostream& out, const GroundTruthByVideo& gts) {
  for (const auto& [video, list] : gts) {
    for (const auto& g : list) {
      json r;
      r["video_id"] = g.video_id;
      r["action_class"] = g.action_class;
      put_box(r, g.cuboid, true);
      jsonl::write_record(out, r);
    }
  }
}

void write_scores(std::ostream& out, const ScoreMap& scores) {
  for (const auto& [id, s] : scores) {
    json r;
    r["proposal_id"] = s.proposal_id;
    r["class_scores"] = s.class_scores;
    r["v_st"] = s.v_st;
    r["v_end"] = s.v_end;
    jsonl::write_record(out, r);
  }
}

void write_proposals(std::ostream& out, const ProposalsByVideo& proposals) {
  for (const auto& [video, list] : proposals) {
    for (const auto& p : list) {
      json r;
      r["proposal_id"] = p.id;
      r["video_id"] = p.video_id;
      r["parent_id"] = p.parent_id.empty() ? json(nullptr) : json(p.parent_id);
      r["provenance"] = to_string(p.provenance);
      put_box(r, p.cuboid, true);
      jsonl::write_record(out, r);
    }
  }
}

}  // namespace actdet
