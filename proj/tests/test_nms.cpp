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

#include <algorithm>
#include <random>
#include <vector>

#include "actdet/errors.hpp"
#include "actdet/nms.hpp"
#include "oracles.hpp"

using namespace actdet;

namespace {

ScoredDetection det(std::string id, const Cuboid& c, int cls, double conf, std::string video = "v") {
  return {std::move(video), std::move(id), c, cls, conf};
}

std::vector<std::string> ids(const std::vector<ScoredDetection>& dets) {
  std::vector<std::string> out;
  for (const auto& d : dets) out.push_back(d.proposal_id);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_SUITE("nms") {

TEST_CASE("basic cases") {
  CHECK(nms_3d({}, {}).empty());
  const Cuboid c{0, 0, 10, 10, 0, 20};
  const std::vector<ScoredDetection> same{det("a", c, 1, 0.9), det("b", c, 1, 0.8)};
  CHECK(ids(nms_3d(same, {})) == std::vector<std::string>{"a"});
  const std::vector<ScoredDetection> cross{det("a", c, 1, 0.9), det("b", c, 2, 0.8)};
  CHECK(ids(nms_3d(cross, {})).size() == 2);
  const std::vector<ScoredDetection> videos{det("a", c, 1, 0.9, "v1"), det("b", c, 1, 0.8, "v2")};
  CHECK(ids(nms_3d(videos, {})).size() == 2);
}

TEST_CASE("both overlaps must exceed their thresholds") {
  const std::vector<ScoredDetection> temporal_only{det("a", {0, 0, 10, 10, 0, 20}, 1, 0.9),
                                                   det("b", {50, 50, 60, 60, 0, 20}, 1, 0.8)};
  CHECK(nms_3d(temporal_only, {}).size() == 2);
  const std::vector<ScoredDetection> spatial_only{det("a", {0, 0, 10, 10, 0, 20}, 1, 0.9),
                                                  det("b", {0, 0, 10, 10, 100, 120}, 1, 0.8)};
  CHECK(nms_3d(spatial_only, {}).size() == 2);
}

TEST_CASE("output is ordered by rank and ties break by proposal id") {
  const Cuboid c{0, 0, 10, 10, 0, 20};
  const std::vector<ScoredDetection> tie{det("b", c, 1, 0.5), det("a", c, 1, 0.5)};
  const auto out = nms_3d(tie, {});
  REQUIRE(out.size() == 1);
  CHECK(out[0].proposal_id == "a");
  for (std::size_t i = 1; i < out.size(); ++i) CHECK_FALSE(nms_rank_less(out[i], out[i - 1]));
}

TEST_CASE("idempotent and equal to the fixed-point oracle") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> count(0, 8), cls(1, 2);
  std::uniform_real_distribution<double> conf(0.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<ScoredDetection> dets;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      dets.push_back(det("d" + std::to_string(i), oracle::random_cuboid(rng, 20.0, 30), cls(rng), conf(rng)));
    }
    const auto once = nms_3d(dets, {});
    CHECK(nms_3d(once, {}) == once);
    const auto want = oracle::nms_fixed_point(dets, {});
    REQUIRE(want.has_value());
    std::vector<std::string> expect;
    for (std::size_t i : *want) expect.push_back(dets[i].proposal_id);
    std::sort(expect.begin(), expect.end());
    CHECK(ids(once) == expect);
  }
}

TEST_CASE("threshold validation") {
  NmsParams p;
  p.temporal_iou_thresh = 1.5;
  CHECK_THROWS_AS(p.validate(), ValidationError);
}

}  // TEST_SUITE
