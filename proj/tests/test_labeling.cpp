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

#include <map>
#include <vector>

#include "actdet/errors.hpp"
#include "actdet/labeling.hpp"

using namespace actdet;

namespace {

const LabelSet kLabels = LabelSet::diva();

Proposal prop(const Cuboid& c, Provenance prov = Provenance::clustering, std::string id = "p") {
  return {std::move(id), "v", prov == Provenance::clustering ? "" : "parent", prov, c};
}

GroundTruthAction gt(const Cuboid& c, std::string cls = "loading") {
  return {"v", std::move(cls), c};
}

LabeledProposal positive(int cls, std::string id) {
  LabeledProposal l;
  l.proposal = prop({0, 0, 1, 1, 0, 1}, Provenance::clustering, std::move(id));
  l.designation = Designation::positive;
  l.action_class = cls;
  l.regression_target = TemporalPair{-1, 1};
  return l;
}

}  // namespace

TEST_SUITE("labeling") {

TEST_CASE("a proposal identical to a ground truth is positive") {
  const Cuboid c{0, 0, 100, 100, 0, 63};
  const std::vector<GroundTruthAction> gts{gt(c, "opening_trunk")};
  const auto l = designate(prop(c), gts, kLabels, {});
  CHECK(l.designation == Designation::positive);
  CHECK(l.action_class == *kLabels.index_of("opening_trunk"));
  REQUIRE(l.regression_target);
  CHECK(l.regression_target->start == -0.984375);
  CHECK(l.regression_target->end == 0.984375);
  CHECK(l.matched_gt == 0);
}

TEST_CASE("no overlap is an easy negative") {
  const std::vector<GroundTruthAction> gts{gt({0, 0, 10, 10, 0, 9})};
  const auto l = designate(prop({50, 50, 60, 60, 100, 120}), gts, kLabels, {});
  CHECK(l.designation == Designation::easy_negative);
  CHECK(l.action_class == 0);
  CHECK_FALSE(l.regression_target);
  CHECK(designate(prop({50, 50, 60, 60, 100, 120}), {}, kLabels, {}).designation ==
        Designation::easy_negative);
}

TEST_CASE("spatial IoU 0.5 and temporal IoU 0.1 is a hard negative") {
  // Spatial: [0,100] vs [0,50] in x -> 0.5. Temporal: 10 of 100 frames.
  const std::vector<GroundTruthAction> gts{gt({0, 0, 100, 100, 0, 99})};
  const auto l = designate(prop({0, 0, 50, 100, 0, 9}), gts, kLabels, {});
  CHECK(l.designation == Designation::hard_negative);
}

TEST_CASE("middle temporal band is discarded") {
  const std::vector<GroundTruthAction> gts{gt({0, 0, 100, 100, 0, 99})};
  CHECK(designate(prop({0, 0, 100, 100, 0, 29}), gts, kLabels, {}).designation ==
        Designation::discarded);
  // High temporal overlap with too little spatial overlap.
  CHECK(designate(prop({0, 0, 20, 100, 0, 99}), gts, kLabels, {}).designation ==
        Designation::discarded);
}

TEST_CASE("best match prefers the larger temporal IoU among spatial matches") {
  const std::vector<GroundTruthAction> gts{gt({0, 0, 100, 100, 0, 99}, "loading"),
                                           gt({0, 0, 100, 100, 200, 260}, "unloading")};
  const auto l = designate(prop({0, 0, 100, 100, 195, 262}), gts, kLabels, {});
  CHECK(l.designation == Designation::positive);
  CHECK(l.action_class == *kLabels.index_of("unloading"));
  CHECK(l.matched_gt == 1);
}

TEST_CASE("batched labeling agrees with designate") {
  const std::vector<GroundTruthAction> gts{gt({0, 0, 100, 100, 0, 99}),
                                           gt({200, 0, 260, 80, 50, 300}, "exit")};
  std::vector<Proposal> props;
  for (int i = 0; i < 20; ++i) {
    props.push_back(prop({i * 10.0, 0, i * 10.0 + 80, 90, i * 15, i * 15 + 60}));
  }
  const auto batched = label_proposals(props, gts, kLabels, {});
  REQUIRE(batched.size() == props.size());
  for (std::size_t i = 0; i < props.size(); ++i) {
    const auto one = designate(props[i], gts, kLabels, {});
    CHECK(batched[i].designation == one.designation);
    CHECK(batched[i].action_class == one.action_class);
    CHECK(batched[i].matched_gt == one.matched_gt);
  }
}

TEST_CASE("training set selection") {
  std::vector<LabeledProposal> ls(4);
  ls[0].proposal = prop({}, Provenance::jittering, "a");
  ls[0].designation = Designation::easy_negative;
  ls[1].proposal = prop({}, Provenance::jittering, "b");
  ls[1].designation = Designation::hard_negative;
  ls[2].proposal = prop({}, Provenance::jittering, "c");
  ls[2].designation = Designation::positive;
  ls[3].proposal = prop({}, Provenance::clustering, "d");
  ls[3].designation = Designation::easy_negative;
  const auto sel = select_training_set(ls);
  std::vector<std::string> ids;
  for (const auto& l : sel) ids.push_back(l.proposal.id);
  CHECK(ids == std::vector<std::string>{"b", "c", "d"});
}

TEST_CASE("class balancing cycles through instances") {
  std::vector<LabeledProposal> ls{positive(1, "a1"), positive(2, "b1"), positive(1, "a2"),
                                  positive(2, "b2"), positive(2, "b3"), positive(2, "b4")};
  const auto out = balance_classes(ls);
  REQUIRE(out.size() == 8);
  for (std::size_t i = 0; i < 6; ++i) CHECK(out[i].copy == 0);
  CHECK(out[6].sample.proposal.id == "a1");
  CHECK(out[7].sample.proposal.id == "a2");
  CHECK(out[6].copy == 1);
  std::map<std::string, int> count;
  for (const auto& t : out) ++count[t.sample.proposal.id];
  CHECK(count["a1"] == 2);
  CHECK(count["a2"] == 2);
  CHECK(count["b1"] == 1);
}

TEST_CASE("class balancing: equal classes are a no-op, large counts reach the max") {
  std::vector<LabeledProposal> eq{positive(1, "a"), positive(2, "b")};
  CHECK(balance_classes(eq).size() == 2);

  std::vector<LabeledProposal> big;
  for (int i = 0; i < 215; ++i) big.push_back(positive(1, "u" + std::to_string(i)));
  for (int i = 0; i < 2554; ++i) big.push_back(positive(3, "r" + std::to_string(i)));
  const auto out = balance_classes(big);
  std::map<int, int> per_class;
  for (const auto& t : out) ++per_class[t.sample.action_class];
  CHECK(per_class[1] == 2554);
  CHECK(per_class[3] == 2554);
}

TEST_CASE("class balancing: required class without positives is an error") {
  std::vector<LabeledProposal> ls{positive(1, "a")};
  const std::vector<int> required{1, 2};
  try {
    balance_classes(ls, required, &kLabels);
    FAIL("expected an exception");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("vehicle_turning_left") != std::string::npos);
  }
}

TEST_CASE("designation names round-trip") {
  for (auto d : {Designation::positive, Designation::easy_negative, Designation::hard_negative,
                 Designation::discarded}) {
    CHECK(parse_designation(to_string(d)) == d);
  }
}

}  // TEST_SUITE
