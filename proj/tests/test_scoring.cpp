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

#include <cmath>
#include <random>
#include <vector>

#include "actdet/errors.hpp"
#include "actdet/hungarian.hpp"
#include "actdet/scoring.hpp"
#include "oracles.hpp"

using namespace actdet;

namespace {

const LabelSet kLabels = LabelSet::diva();

ScoredDetection det(const Cuboid& c, const std::string& cls, double conf, std::string id = "d",
                    std::string video = "v") {
  return {std::move(video), std::move(id), c, *kLabels.index_of(cls), conf};
}

GroundTruthAction gt(const Cuboid& c, std::string cls, std::string video = "v") {
  return {std::move(video), std::move(cls), c};
}

}  // namespace

TEST_SUITE("scoring") {

TEST_CASE("max weight assignment on small matrices") {
  CHECK(max_weight_assignment({}).empty());
  CHECK(max_weight_assignment({{5.0}}) == std::vector<int>{0});
  CHECK(max_weight_assignment({{1, 2}, {3, 10}}) == std::vector<int>{0, 1});
  CHECK(max_weight_assignment({{1, 5}, {4, 1}}) == std::vector<int>{1, 0});
  const auto wide = max_weight_assignment({{0, 0, 7}});
  CHECK(wide == std::vector<int>{2});
  const auto tall = max_weight_assignment({{1}, {9}, {3}});
  CHECK(tall == std::vector<int>{-1, 0, -1});
}

TEST_CASE("hungarian matching examples") {
  const Cuboid c{0, 0, 10, 10, 0, 9};
  std::vector<GroundTruthAction> gts{gt(c, "loading")};
  std::vector<ScoredDetection> one{det(c, "loading", 0.9)};
  CHECK(hungarian_match(one, gts, kLabels, {}).pairs.size() == 1);

  std::vector<ScoredDetection> two{det({0, 0, 10, 10, 0, 4}, "loading", 0.9, "low"),
                                   det({0, 0, 10, 10, 0, 8}, "loading", 0.8, "high")};
  const auto a = hungarian_match(two, gts, kLabels, {});
  REQUIRE(a.pairs.size() == 1);
  CHECK(a.pairs[0].first == 1);
  CHECK(a.temporal_iou_sum == doctest::Approx(0.9));

  std::vector<ScoredDetection> other{det(c, "unloading", 0.9)};
  CHECK(hungarian_match(other, gts, kLabels, {}).pairs.empty());
  std::vector<ScoredDetection> elsewhere{det(c, "loading", 0.9, "d", "w")};
  CHECK(hungarian_match(elsewhere, gts, kLabels, {}).pairs.empty());
}

TEST_CASE("hungarian matching equals exhaustive search") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> size(0, 5), cls(0, 1);
  const char* names[] = {"loading", "unloading"};
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<ScoredDetection> dets;
    std::vector<GroundTruthAction> gts;
    const int nd = size(rng), ng = size(rng);
    for (int i = 0; i < nd; ++i) dets.push_back(det(oracle::random_cuboid(rng, 20, 30), names[cls(rng)], 0.5));
    for (int i = 0; i < ng; ++i) gts.push_back(gt(oracle::random_cuboid(rng, 20, 30), names[cls(rng)]));
    const MatchParams params{0.2, 0.0};
    std::vector<std::vector<bool>> allowed(dets.size(), std::vector<bool>(gts.size()));
    std::vector<std::vector<double>> w(dets.size(), std::vector<double>(gts.size()));
    for (std::size_t d = 0; d < dets.size(); ++d) {
      for (std::size_t g = 0; g < gts.size(); ++g) {
        const double t = oracle::frame_iou(dets[d].cuboid, gts[g].cuboid);
        allowed[d][g] = dets[d].action_class == *kLabels.index_of(gts[g].action_class) && t >= 0.2;
        w[d][g] = t;
      }
    }
    const auto want = oracle::exhaustive_assignment(allowed, w);
    const auto got = hungarian_match(dets, gts, kLabels, params);
    CHECK(got.pairs.size() == want.cardinality);
    CHECK(got.temporal_iou_sum == doctest::Approx(want.iou_sum).epsilon(1e-9));
  }
}

TEST_CASE("DET curve examples") {
  const Cuboid a{0, 0, 10, 10, 0, 9}, b{20, 20, 30, 30, 50, 59};
  std::vector<GroundTruthAction> gts{gt(a, "loading"), gt(b, "loading")};

  std::vector<ScoredDetection> perfect{det(a, "loading", 0.9, "x"), det(b, "loading", 0.7, "y")};
  const auto pc = det_curve(perfect, gts, 10.0, kLabels, {});
  REQUIRE(!pc.points.empty());
  CHECK(pc.points.back().p_miss == 0.0);
  CHECK(pc.points.back().rate_fa == 0.0);

  std::vector<ScoredDetection> three{det(a, "loading", 0.9, "x"), det(b, "loading", 0.9, "y"),
                                     det({100, 100, 110, 110, 200, 210}, "loading", 0.9, "z")};
  const auto c3 = det_curve(three, gts, 10.0, kLabels, {});
  REQUIRE(c3.points.size() == 1);
  CHECK(c3.points[0].rate_fa == doctest::Approx(0.1));
  CHECK(c3.points[0].p_miss == 0.0);

  const auto none = det_curve({}, gts, 10.0, kLabels, {});
  REQUIRE(none.points.size() == 1);
  CHECK(none.points[0].rate_fa == 0.0);
  CHECK(none.points[0].p_miss == 1.0);

  CHECK_THROWS_AS(det_curve(perfect, gts, 0.0, kLabels, {}), ValidationError);
}

TEST_CASE("mean P_miss at fixed rates") {
  DetCurve c{"x", {{0.1, 0.5, 0.9}, {0.2, 0.3, 0.8}, {1.0, 0.1, 0.5}}};
  const std::vector<double> rates{0.05, 0.1, 0.15, 0.2, 5.0};
  const auto got = mean_pmiss_at(c, rates);
  CHECK(got == std::vector<double>{1.0, 0.5, 0.5, 0.3, 0.1});
  CHECK(kDefaultRates == std::vector<double>{0.01, 0.03, 0.1, 0.15, 0.2, 1.0});
}

TEST_CASE("evaluation report aggregates per-class curves") {
  const Cuboid a{0, 0, 10, 10, 0, 9}, b{20, 20, 30, 30, 50, 59};
  std::vector<GroundTruthAction> gts{gt(a, "loading"), gt(b, "exit")};
  std::vector<ScoredDetection> dets{det(a, "loading", 0.9, "x"), det(b, "exit", 0.7, "y"),
                                    det(b, "open", 0.6, "z")};
  const auto r = evaluate(dets, gts, 5.0, kLabels, {}, kDefaultRates);
  REQUIRE(r.classes.size() == 2);
  CHECK(r.aggregate_pmiss_at == std::vector<double>(6, 0.0));
  CHECK(r.warnings.size() == 1);

  const auto empty = evaluate({}, gts, 5.0, kLabels, {}, kDefaultRates);
  CHECK(empty.aggregate_pmiss_at == std::vector<double>(6, 1.0));
}

TEST_CASE("proposal recall") {
  GroundTruthByVideo gts;
  gts["v"] = {gt({0, 0, 10, 10, 0, 9}, "loading"), gt({50, 50, 70, 70, 100, 140}, "exit")};
  ProposalsByVideo exact;
  for (const auto& g : gts["v"]) exact["v"].push_back({"p", "v", "", Provenance::clustering, g.cuboid});
  const std::vector<double> grid{0.1, 0.5, 0.9, 1.0};
  for (auto mode : {IouMode::volume3d, IouMode::spatial_temporal}) {
    CHECK(recall_curve(exact, gts, mode, grid) == std::vector<double>(4, 1.0));
    CHECK(recall_curve({}, gts, mode, grid) == std::vector<double>(4, 0.0));
  }
  ProposalsByVideo partial;
  partial["v"].push_back({"p", "v", "", Provenance::clustering, {0, 0, 10, 10, 0, 4}});
  const auto r = recall_curve(partial, gts, IouMode::volume3d, grid);
  for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i] <= r[i - 1]);
  CHECK(r[0] == 0.5);
  CHECK(r[2] == 0.0);
}

}  // TEST_SUITE
