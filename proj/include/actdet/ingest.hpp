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

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "actdet/geometry.hpp"
#include "actdet/proposal.hpp"

namespace actdet {

/// One detector hit on one frame.
struct Detection {
  std::string video_id;
  int frame = 0;
  std::string object_class;
  double x_min = 0, y_min = 0, x_max = 0, y_max = 0;
  double confidence = 0;

  double center_x() const { return 0.5 * (x_min + x_max); }
  double center_y() const { return 0.5 * (y_min + y_max); }
  /// Single-frame cuboid spanned by the box.
  Cuboid cuboid() const { return {x_min, y_min, x_max, y_max, frame, frame}; }

  friend bool operator==(const Detection&, const Detection&) = default;
};

struct GroundTruthAction {
  std::string video_id;
  std::string action_class;
  Cuboid cuboid;

  friend bool operator==(const GroundTruthAction&, const GroundTruthAction&) = default;
};

/// Classifier output for one proposal. class_scores[0] is the non-action
/// probability; (v_st, v_end) is the normalised temporal refinement.
struct ScoreRecord {
  std::string proposal_id;
  std::vector<double> class_scores;
  double v_st = 0;
  double v_end = 0;

  friend bool operator==(const ScoreRecord&, const ScoreRecord&) = default;
};

struct VideoMeta {
  std::string video_id;
  int num_frames = 0;
  double frame_rate = 0;
  int width = 0;
  int height = 0;

  double minutes() const { return num_frames / frame_rate / 60.0; }

  friend bool operator==(const VideoMeta&, const VideoMeta&) = default;
};

/// Ordered action vocabulary. Class index 0 is reserved for "no action";
/// names map to indices 1..size().
class LabelSet {
 public:
  LabelSet() = default;
  explicit LabelSet(std::vector<std::string> names);

  /// The twelve activity classes of the surveillance benchmark.
  static LabelSet diva();

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  /// 1-based class index, or nullopt for an unknown name.
  std::optional<int> index_of(std::string_view name) const;
  /// Name of a 1-based class index.
  const std::string& name(int index) const;

  friend bool operator==(const LabelSet&, const LabelSet&) = default;

 private:
  std::vector<std::string> names_;
};

struct DetectionFilter {
  /// Detections with confidence below this value are dropped.
  double confidence_floor = 0.5;
  /// Object classes kept for clustering; empty keeps everything.
  std::vector<std::string> object_classes{"person", "vehicle"};

  friend bool operator==(const DetectionFilter&, const DetectionFilter&) = default;
};

using VideoMetaMap = std::map<std::string, VideoMeta>;
using DetectionsByVideo = std::map<std::string, std::vector<Detection>>;
using GroundTruthByVideo = std::map<std::string, std::vector<GroundTruthAction>>;
using ProposalsByVideo = std::map<std::string, std::vector<Proposal>>;
using ScoreMap = std::map<std::string, ScoreRecord>;

// Readers. All formats are JSON Lines; blank lines are skipped. Malformed
// records raise ValidationError carrying the source name and line number.
// When `meta` is supplied, frames and boxes are also checked against the
// declared video bounds.

VideoMetaMap read_video_meta(std::istream& in, std::string_view source = "<stream>");
DetectionsByVideo read_detections(std::istream& in, const DetectionFilter& filter,
                                  const VideoMetaMap* meta = nullptr,
                                  std::string_view source = "<stream>");
GroundTruthByVideo read_ground_truth(std::istream& in, const LabelSet& labels,
                                     const VideoMetaMap* meta = nullptr,
                                     std::string_view source = "<stream>");
ScoreMap read_scores(std::istream& in, std::size_t num_classes,
                     std::string_view source = "<stream>");
ProposalsByVideo read_proposals(std::istream& in, std::string_view source = "<stream>");

VideoMetaMap load_video_meta(const std::filesystem::path& path);
DetectionsByVideo load_detections(const std::filesystem::path& path, const DetectionFilter& filter,
                                  const VideoMetaMap* meta = nullptr);
GroundTruthByVideo load_ground_truth(const std::filesystem::path& path, const LabelSet& labels,
                                     const VideoMetaMap* meta = nullptr);
ScoreMap load_scores(const std::filesystem::path& path, std::size_t num_classes);
ProposalsByVideo load_proposals(const std::filesystem::path& path);

// Writers emit one record per line in canonical order.

void write_video_meta(std::ostream& out, const VideoMetaMap& meta);
void write_detections(std::ostream& out, const DetectionsByVideo& dets);
void write_ground_truth(std::ostream& out, const GroundTruthByVideo& gts);
void write_scores(std::ostream& out, const ScoreMap& scores);
void write_proposals(std::ostream& out, const ProposalsByVideo& proposals);

/// Opens `path` for reading; throws IoError on failure.
std::ifstream open_input(const std::filesystem::path& path);
/// Creates parent directories and opens `path` for writing; throws IoError.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace actdet
