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

#include <doctest.h>

#include <sstream>
#include <string>

#include "actdet/errors.hpp"
#include "actdet/ingest.hpp"

using namespace actdet;

namespace {

std::string det_line(const std::string& video, int frame, double conf,
                     const std::string& cls = "person", double x = 0) {
  std::ostringstream s;
  s << R"({"video_id":")" << video << R"(","frame":)" << frame << R"(,"object_class":")" << cls
    << R"(","x_min":)" << x << R"(,"y_min":0,"x_max":)" << x + 10
    << R"(,"y_max":10,"confidence":)" << conf << "}\n";
  return s.str();
}

}  // namespace

TEST_SUITE("ingest") {

TEST_CASE("detections: empty input gives an empty collection") {
  std::istringstream in("");
  CHECK(read_detections(in, {}).empty());
  std::istringstream blank("\n  \n");
  CHECK(read_detections(blank, {}).empty());
}

TEST_CASE("detections: grouped by video and sorted") {
  std::istringstream in(det_line("b", 4, 0.9) + det_line("a", 7, 0.8) + det_line("a", 2, 0.7));
  const auto got = read_detections(in, {});
  REQUIRE(got.size() == 2);
  REQUIRE(got.at("a").size() == 2);
  CHECK(got.at("a")[0].frame == 2);
  CHECK(got.at("a")[1].frame == 7);
  CHECK(got.at("b").size() == 1);
}

TEST_CASE("detections: confidence outside [0, 1] is rejected") {
  std::istringstream in(det_line("a", 0, 1.5));
  CHECK_THROWS_AS(read_detections(in, {}), ValidationError);
  std::istringstream low(det_line("a", 0, -0.1));
  CHECK_THROWS_AS(read_detections(low, {}), ValidationError);
}

TEST_CASE("detections: filter drops low confidence and other object classes") {
  std::istringstream in(det_line("a", 0, 0.4) + det_line("a", 1, 0.6) +
                        det_line("a", 2, 0.9, "bike"));
  const auto got = read_detections(in, {});
  REQUIRE(got.at("a").size() == 1);
  CHECK(got.at("a")[0].frame == 1);
}

TEST_CASE("detections: checked against metadata") {
  VideoMetaMap meta{{"a", {"a", 10, 30.0, 100, 100}}};
  std::istringstream past(det_line("a", 10, 0.9));
  CHECK_THROWS_AS(read_detections(past, {}, &meta), ValidationError);
  std::istringstream unknown(det_line("zz", 1, 0.9));
  CHECK_THROWS_AS(read_detections(unknown, {}, &meta), ValidationError);
}

TEST_CASE("malformed records carry source and line") {
  std::istringstream in(det_line("a", 0, 0.9) + "{not json\n");
  try {
    read_detections(in, {}, nullptr, "dets.jsonl");
    FAIL("expected an exception");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("dets.jsonl:2:") != std::string::npos);
  }
  std::istringstream missing(R"({"video_id":"a","frame":0})" "\n");
  CHECK_THROWS_AS(read_detections(missing, {}), ValidationError);
}

TEST_CASE("ground truth: empty, one record and unknown class") {
  const LabelSet labels = LabelSet::diva();
  std::istringstream empty("");
  CHECK(read_ground_truth(empty, labels).empty());

  std::istringstream one(
      R"({"video_id":"v","action_class":"loading","x_min":0,"y_min":0,"x_max":5,"y_max":5,"f_start":1,"f_end":9})"
      "\n");
  const auto got = read_ground_truth(one, labels);
  REQUIRE(got.at("v").size() == 1);
  CHECK(got.at("v")[0].cuboid == Cuboid{0, 0, 5, 5, 1, 9});

  std::istringstream bad(
      R"({"video_id":"v","action_class":"Parkour","x_min":0,"y_min":0,"x_max":5,"y_max":5,"f_start":1,"f_end":9})"
      "\n");
  try {
    read_ground_truth(bad, labels);
    FAIL("expected an exception");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("Parkour") != std::string::npos);
    CHECK(msg.find("vehicle_u_turn") != std::string::npos);
  }
}

TEST_CASE("ground truth: frames reversed are rejected") {
  std::istringstream bad(
      R"({"video_id":"v","action_class":"loading","x_min":0,"y_min":0,"x_max":5,"y_max":5,"f_start":9,"f_end":1})"
      "\n");
  CHECK_THROWS_AS(read_ground_truth(bad, LabelSet::diva()), ValidationError);
}

TEST_CASE("scores: arity, sum and duplicates") {
  std::istringstream empty("");
  CHECK(read_scores(empty, 12).empty());

  std::string ok = R"({"proposal_id":"p","class_scores":[0.4,0.05,0.05,0.05,0.05,0.05,0.05,0.05,0.05,0.05,0.05,0.05,0.05],"v_st":-1,"v_end":1})";
  std::istringstream good(ok + "\n");
  const auto got = read_scores(good, 12);
  REQUIRE(got.size() == 1);
  CHECK(got.at("p").class_scores.size() == 13);

  std::istringstream twelve(
      R"({"proposal_id":"p","class_scores":[0.45,0.05,0.05,0.05,0.05,0.05,0.05,0.05,0.05,0.05,0.05,0.05],"v_st":0,"v_end":0})"
      "\n");
  CHECK_THROWS_AS(read_scores(twelve, 12), ValidationError);

  std::istringstream dup(ok + "\n" + ok + "\n");
  CHECK_THROWS_AS(read_scores(dup, 12), ValidationError);

  std::istringstream sum(
      R"({"proposal_id":"p","class_scores":[0.5,0.6],"v_st":0,"v_end":0})"
      "\n");
  CHECK_THROWS_AS(read_scores(sum, 1), ValidationError);
}

TEST_CASE("writers round-trip through readers") {
  VideoMetaMap meta{{"a", {"a", 100, 25.0, 640, 480}}, {"b", {"b", 50, 30.0, 320, 240}}};
  std::stringstream m;
  write_video_meta(m, meta);
  CHECK(read_video_meta(m) == meta);

  DetectionsByVideo dets;
  dets["a"].push_back({"a", 3, "person", 1.25, 2.5, 11.0, 20.0, 0.75});
  dets["a"].push_back({"a", 9, "vehicle", 0.1, 0.2, 0.3, 0.4, 2.0 / 3.0});
  std::stringstream d;
  write_detections(d, dets);
  CHECK(read_detections(d, {}) == dets);

  ProposalsByVideo props;
  props["a"].push_back({"a/c0000", "a", "", Provenance::clustering, {0, 0, 5, 5, 0, 9}});
  props["a"].push_back({"a/c0000/a0w16", "a", "a/c0000", Provenance::jittering, {0, 0, 5, 5, 0, 16}});
  std::stringstream p;
  write_proposals(p, props);
  CHECK(read_proposals(p) == props);

  ScoreMap scores;
  scores["x"] = {"x", {0.25, 0.75}, -0.5, 0.5};
  std::stringstream s;
  write_scores(s, scores);
  CHECK(read_scores(s, 1) == scores);
}

TEST_CASE("missing files raise IoError") {
  CHECK_THROWS_AS(load_detections("/nonexistent/file.jsonl", {}), IoError);
}

TEST_CASE("label set lookup is 1-based") {
  const LabelSet labels = LabelSet::diva();
  CHECK(labels.size() == 12);
  CHECK(labels.index_of("vehicle_u_turn") == 1);
  CHECK(labels.name(12) == "exit");
  CHECK_FALSE(labels.index_of("nothing").has_value());
}

}  // TEST_SUITE
