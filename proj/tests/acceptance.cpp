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

// Acceptance suite: one PASS/FAIL line per acceptance criterion.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "actdet/geometry.hpp"
#include "actdet/jitter.hpp"
#include "actdet/labeling.hpp"
#include "actdet/nms.hpp"
#include "actdet/pipeline.hpp"
#include "actdet/refine.hpp"
#include "actdet/scoring.hpp"
#include "actdet/synth.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace actdet;
using Clock = std::chrono::steady_clock;

namespace {

// Tolerances and budgets.
constexpr double kVoxelTolerance = 0.02;
constexpr int kVoxelResolution = 4;
constexpr double kGeometryBudgetSec = 5.0;
constexpr double kRefineWithinFrames = 0.5;
constexpr double kRefineExactFraction = 0.99;
constexpr double kDerivativeTolerance = 1e-4;
constexpr double kNmsBudgetSec = 10.0;
constexpr double kMatchBudgetSec = 10.0;
constexpr double kPmissCeiling = 0.1;
constexpr double kEndToEndBudgetSec = 60.0;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (!pass) detail << "; ";
      else detail.str("");
      pass = false;
      detail << what;
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

// 1 ---------------------------------------------------------------------------
Outcome geometry_properties() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  int violations = 0;
  for (int i = 0; i < 200; ++i) {
    const Cuboid a = oracle::random_cuboid(rng), b = oracle::random_cuboid(rng);
    for (auto fn : {&spatial_iou, &temporal_iou, &iou_3d}) {
      const double ab = fn(a, b), ba = fn(b, a);
      if (ab != ba || ab < 0.0 || ab > 1.0 || fn(a, a) != 1.0) ++violations;
    }
  }
  o.require(violations == 0, std::to_string(violations) + " property violations");
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Cuboid a = oracle::random_cuboid(rng, 20.0, 20);
    Cuboid b = oracle::random_cuboid(rng, 20.0, 20);
    if (i % 2 == 0) {
      // Half of the pairs are shifted copies of a.
      b = a;
      b.x_min += 0.5 * (i % 5);
      b.x_max += 0.5 * (i % 5) + 0.5 * (i % 3);
      b.f_end += i % 4;
    }
    worst = std::max(worst, std::abs(iou_3d(a, b) - oracle::voxel_iou(a, b, kVoxelResolution)));
  }
  o.require(worst <= kVoxelTolerance, "voxel oracle deviation " + fmt(worst, 6));
  const double elapsed = seconds_since(t0);
  o.require(elapsed < kGeometryBudgetSec, "took " + fmt(elapsed, 2) + " s");
  if (o.pass) {
    o.detail << "200 pairs symmetric, bounded, identity = 1; max |iou_3d - voxel| = " << fmt(worst, 6)
             << " over 50 pairs; " << fmt(elapsed, 2) << " s";
  }
  return o;
}

// 2 ---------------------------------------------------------------------------
Outcome refinement_round_trip() {
  Outcome o;
  std::mt19937_64 rng(202);
  std::uniform_int_distribution<int> start(0, 5000), len(1, 300);
  int exact = 0, within = 0, fallbacks = 0;
  const int total = 1000;
  for (int i = 0; i < total; ++i) {
    const int p0 = start(rng), g0 = start(rng) % 400 + p0 / 2;
    const Cuboid p{0, 0, 1, 1, p0, p0 + len(rng) - 1};
    const Cuboid g{0, 0, 1, 1, g0, g0 + len(rng) - 1};
    const TemporalPair r = regression_target(p, g);
    // Decode independently of the library.
    const double mid = (p.f_start + p.f_end) / 2.0;
    const double half = (p.f_end - p.f_start + 1) / 2.0;
    const double s = mid + r.start * half, e = mid + r.end * half;
    if (std::abs(s - g.f_start) <= kRefineWithinFrames && std::abs(e - g.f_end) <= kRefineWithinFrames) {
      ++within;
    }
    const Refinement out = apply_refinement(p, r);
    fallbacks += out.fell_back;
    exact += out.cuboid.f_start == g.f_start && out.cuboid.f_end == g.f_end;
  }
  const double frac = static_cast<double>(exact) / total;
  o.require(within == total, std::to_string(total - within) + " decodes off by more than 0.5 frame");
  o.require(frac >= kRefineExactFraction, "exact after rounding only " + fmt(100 * frac, 1) + "%");
  if (o.pass) {
    o.detail << within << "/" << total << " within 0.5 frame; " << exact << "/" << total
             << " exact after rounding (" << fallbacks << " single-frame fallbacks)";
  }
  return o;
}

// 3 ---------------------------------------------------------------------------
Outcome loss_values() {
  Outcome o;
  const double xs[] = {0.0, 0.5, 1.0, 2.0};
  const double want[] = {0.0, 0.125, 0.5, 1.5};
  for (int i = 0; i < 4; ++i) {
    o.require(smooth_l1(xs[i]) == want[i], "smooth_l1(" + fmt(xs[i], 1) + ") = " + fmt(smooth_l1(xs[i]), 17));
  }
  const double h = 1e-6;
  for (double x : {1.0, -1.0}) {
    const double left = (smooth_l1(x) - smooth_l1(x - h)) / h;
    const double right = (smooth_l1(x + h) - smooth_l1(x)) / h;
    const double slope = x > 0 ? 1.0 : -1.0;
    o.require(std::abs(left - slope) < kDerivativeTolerance && std::abs(right - slope) < kDerivativeTolerance,
              "derivative jump at x = " + fmt(x, 0));
    o.require(std::abs(smooth_l1(x + h) - smooth_l1(x - h)) / (2 * h) - 1.0 < kDerivativeTolerance,
              "central difference at x = " + fmt(x, 0));
  }
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> u(0.0, 1.0), v(-3.0, 3.0);
  int mismatches = 0;
  for (int i = 0; i < 200; ++i) {
    std::vector<double> probs(13);
    double sum = 0;
    for (auto& p : probs) sum += (p = u(rng));
    for (auto& p : probs) p /= sum;
    const double fl = full_loss(probs, 0, {v(rng), v(rng)}, TemporalPair{v(rng), v(rng)}, {});
    if (fl != cross_entropy(probs, 0)) ++mismatches;
  }
  o.require(mismatches == 0, std::to_string(mismatches) + " full_loss(a = 0) mismatches");
  if (o.pass) o.detail << "smooth_l1 exact at {0, 0.5, 1, 2}; C1 at |x| = 1; full_loss(a = 0) == cross_entropy on 200 draws";
  return o;
}

// 4 ---------------------------------------------------------------------------
Outcome jitter_fixture() {
  Outcome o;
  const VideoMeta video{"v", 100000, 30.0, 1920, 1080};
  const std::vector<Proposal> parent{{"v/c0000", "v", "", Provenance::clustering, {0, 0, 50, 50, 0, 30}}};
  JitterParams params;
  params.stride = 15;
  std::string first;
  std::size_t count = 0;
  for (int run = 0; run < 3; ++run) {
    ProposalsByVideo out;
    out["v"] = jitter_proposals(parent, params, video);
    count = out["v"].size();
    std::ostringstream s;
    write_proposals(s, out);
    if (run == 0) first = s.str();
    o.require(s.str() == first, "run " + std::to_string(run) + " differs");
  }
  o.require(count == 13, "got " + std::to_string(count) + " proposals");
  if (o.pass) o.detail << "13 proposals, byte-identical across 3 runs";
  return o;
}

// 5 ---------------------------------------------------------------------------
Outcome labeling_matrix() {
  Outcome o;
  const LabelSet labels = LabelSet::diva();
  const std::vector<GroundTruthAction> gts{{"v", "loading", {0, 0, 100, 100, 0, 999}}};
  const double spatial[] = {0.3, 0.4};
  const double temporal[] = {0.005, 0.1, 0.3, 0.6};
  const Designation expected[2][4] = {
      {Designation::easy_negative, Designation::easy_negative, Designation::discarded, Designation::discarded},
      {Designation::easy_negative, Designation::hard_negative, Designation::discarded, Designation::positive}};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 4; ++j) {
      const Cuboid c{0, 0, spatial[i] * 100, 100, 0, static_cast<int>(std::lround(temporal[j] * 1000)) - 1};
      const Proposal p{"p", "v", "", Provenance::clustering, c};
      const double s = spatial_iou(c, gts[0].cuboid), t = temporal_iou(c, gts[0].cuboid);
      o.require(std::abs(s - spatial[i]) < 1e-12 && std::abs(t - temporal[j]) < 1e-12,
                "fixture IoU (" + fmt(s) + ", " + fmt(t) + ") off target");
      const auto got = designate(p, gts, labels, {}).designation;
      o.require(got == expected[i][j], "(" + fmt(spatial[i], 1) + ", " + fmt(temporal[j], 3) + ") -> " +
                                           std::string(to_string(got)));
    }
  }
  if (o.pass) o.detail << "all 8 cells match";
  return o;
}

// 6 ---------------------------------------------------------------------------
Outcome nms_oracle() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(606);
  std::uniform_int_distribution<int> count(0, 8), cls(1, 3);
  std::uniform_real_distribution<double> conf(0.0, 1.0);
  int mismatches = 0, not_idempotent = 0, no_fixed_point = 0;
  for (int rep = 0; rep < 500; ++rep) {
    std::vector<ScoredDetection> dets;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      dets.push_back({"v", "d" + std::to_string(i), oracle::random_cuboid(rng, 15.0, 20), cls(rng), conf(rng)});
    }
    const auto kept = nms_3d(dets, {});
    if (nms_3d(kept, {}) != kept) ++not_idempotent;
    const auto want = oracle::nms_fixed_point(dets, {});
    if (!want) {
      ++no_fixed_point;
      continue;
    }
    std::vector<std::string> a, b;
    for (const auto& d : kept) a.push_back(d.proposal_id);
    for (std::size_t i : *want) b.push_back(dets[i].proposal_id);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) ++mismatches;
  }
  // Identical cuboids in different classes both survive.
  const Cuboid c{0, 0, 10, 10, 0, 10};
  std::vector<ScoredDetection> cross;
  for (int k = 1; k <= 12; ++k) cross.push_back({"v", "x" + std::to_string(k), c, k, 0.5 + k * 0.01});
  const bool cross_ok = nms_3d(cross, {}).size() == cross.size();
  const double elapsed = seconds_since(t0);
  o.require(mismatches == 0, std::to_string(mismatches) + " oracle mismatches");
  o.require(not_idempotent == 0, std::to_string(not_idempotent) + " non-idempotent runs");
  o.require(no_fixed_point == 0, std::to_string(no_fixed_point) + " instances without a unique fixed point");
  o.require(cross_ok, "cross-class suppression observed");
  o.require(elapsed < kNmsBudgetSec, "took " + fmt(elapsed, 2) + " s");
  if (o.pass) o.detail << "500 instances match brute force, idempotent, classes independent; " << fmt(elapsed, 2) << " s";
  return o;
}

// 7 ---------------------------------------------------------------------------
Outcome matching_oracle() {
  Outcome o;
  const auto t0 = Clock::now();
  const LabelSet labels = LabelSet::diva();
  std::mt19937_64 rng(707);
  std::uniform_int_distribution<int> size(0, 6), cls(1, 2);
  int card_mismatch = 0, sum_mismatch = 0;
  for (int rep = 0; rep < 500; ++rep) {
    std::vector<ScoredDetection> dets;
    std::vector<GroundTruthAction> gts;
    const int nd = size(rng), ng = size(rng);
    for (int i = 0; i < nd; ++i) dets.push_back({"v", "d", oracle::random_cuboid(rng, 20, 25), cls(rng), 0.5});
    for (int i = 0; i < ng; ++i) gts.push_back({"v", labels.name(cls(rng)), oracle::random_cuboid(rng, 20, 25)});
    std::vector<std::vector<bool>> allowed(dets.size(), std::vector<bool>(gts.size()));
    std::vector<std::vector<double>> w(dets.size(), std::vector<double>(gts.size()));
    for (std::size_t d = 0; d < dets.size(); ++d) {
      for (std::size_t g = 0; g < gts.size(); ++g) {
        w[d][g] = oracle::frame_iou(dets[d].cuboid, gts[g].cuboid);
        allowed[d][g] = labels.name(dets[d].action_class) == gts[g].action_class && w[d][g] >= 0.2;
      }
    }
    const auto want = oracle::exhaustive_assignment(allowed, w);
    const auto got = hungarian_match(dets, gts, labels, {0.2, 0.0});
    if (got.pairs.size() != want.cardinality) ++card_mismatch;
    else if (std::abs(got.temporal_iou_sum - want.iou_sum) > 1e-9) ++sum_mismatch;
  }
  const double elapsed = seconds_since(t0);
  o.require(card_mismatch == 0, std::to_string(card_mismatch) + " cardinality mismatches");
  o.require(sum_mismatch == 0, std::to_string(sum_mismatch) + " IoU-sum mismatches");
  o.require(elapsed < kMatchBudgetSec, "took " + fmt(elapsed, 2) + " s");
  if (o.pass) o.detail << "500 instances equal exhaustive search; " << fmt(elapsed, 2) << " s";
  return o;
}

// 8 ---------------------------------------------------------------------------
Outcome recall_fixture() {
  Outcome o;
  const PipelineConfig config = synth_config();
  std::vector<double> grid;
  for (int i = 1; i <= 9; ++i) grid.push_back(i / 10.0);
  std::ostringstream summary;
  for (const char* name : {"clean", "noisy"}) {
    const auto data = synthesize(SynthParams::scenario(name), config.labels);
    std::ostringstream text;
    write_detections(text, data.detections);
    std::istringstream in(text.str());
    const auto dets = read_detections(in, config.filter, &data.meta);
    ProposalsByVideo clustered;
    const auto jittered = propose(dets, data.meta, config.cluster, config.jitter, 1, &clustered);
    const auto rj = recall_curve(jittered, data.ground_truth, config.recall_iou, grid);
    const auto rc = recall_curve(clustered, data.ground_truth, config.recall_iou, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      o.require(rj[i] >= rc[i], std::string(name) + ": jittered below clustering at " + fmt(grid[i], 1));
    }
    if (std::string(name) == "noisy") {
      o.require(rj[1] > rc[1], "noisy: no gain at 0.2 (" + fmt(rj[1], 3) + " vs " + fmt(rc[1], 3) + ")");
    } else {
      o.require(rj[1] == 1.0, "clean: recall at 0.2 is " + fmt(rj[1], 3));
    }
    summary << name << " @0.2 jittered " << fmt(rj[1], 3) << " vs clustering " << fmt(rc[1], 3) << "; ";
  }
  if (o.pass) o.detail << summary.str() << "jittered >= clustering on 0.1..0.9";
  return o;
}

// 9 ---------------------------------------------------------------------------
Outcome end_to_end() {
  Outcome o;
  testutil::TempDir dir("acceptance_e2e");
  const auto t0 = Clock::now();
  write_synth_fixture(dir.path(), SynthParams::scenario("clean"), synth_config());
  const PipelineConfig config = load_config(dir / "config.json");
  std::ostringstream log;
  cmd_propose(config, log);
  cmd_label(config, log);
  cmd_finalize(config, log);
  cmd_score(config, log);
  const double elapsed = seconds_since(t0);
  const auto report = nlohmann::json::parse(testutil::slurp(dir / "report.json"));
  const auto rates = report["rates"].get<std::vector<double>>();
  const auto pmiss = report["aggregate"]["pmiss_at"].get<std::vector<double>>();
  o.require(rates == std::vector<double>{0.01, 0.03, 0.1, 0.15, 0.2, 1.0}, "unexpected rate columns");
  double at_one = 1.0;
  for (std::size_t i = 0; i < rates.size() && i < pmiss.size(); ++i) {
    if (rates[i] == 1.0) at_one = pmiss[i];
  }
  o.require(at_one <= kPmissCeiling, "aggregate p_miss at rate_fa 1.0 is " + fmt(at_one, 3));
  o.require(elapsed < kEndToEndBudgetSec, "took " + fmt(elapsed, 2) + " s");
  if (o.pass) {
    o.detail << "aggregate p_miss @1.0 = " << fmt(at_one, 3) << "; six rate columns; " << fmt(elapsed, 2) << " s";
  }
  return o;
}

// 10 --------------------------------------------------------------------------
int run_cli(const std::string& args, const std::filesystem::path& stdout_file) {
  const std::string cmd = std::string(ACTDET_CLI_PATH) + " " + args + " > '" + stdout_file.string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome determinism() {
  Outcome o;
  testutil::TempDir dir("acceptance_det");
  const std::vector<std::string> artefacts{
      "detections.jsonl", "ground_truth.jsonl", "metadata.jsonl", "scores.jsonl", "config.json",
      "proposals.jsonl", "labels.jsonl", "training.jsonl", "final_detections.jsonl", "report.json",
      "recall.json", "curves/aggregate.dat", "det.gp", "loss.jsonl"};
  std::filesystem::path runs[2] = {dir / "run1", dir / "run2"};
  std::string batch;
  for (int a = 0; a <= 12; ++a) {
    batch += R"({"probs":[0.2,0.1,0.1,0.1,0.1,0.05,0.05,0.05,0.05,0.05,0.05,0.05,0.05],"class":)" +
             std::to_string(a) + R"(,"v":[0.1,-0.2],"r":[0.5,2]})" + "\n";
  }
  testutil::spit(dir / "batch.jsonl", batch);
  for (int r = 0; r < 2; ++r) {
    const auto& d = runs[r];
    const std::string cfg = "--config '" + (d / "config.json").string() + "'";
    const auto log = dir / ("log" + std::to_string(r) + ".txt");
    bool ok = run_cli("synth --scenario noisy --seed 9 --output '" + d.string() + "'", log) == 0;
    ok = ok && run_cli("propose --jobs " + std::to_string(r == 0 ? 1 : 4) + " " + cfg, log) == 0;
    ok = ok && run_cli("label " + cfg, log) == 0;
    ok = ok && run_cli("finalize " + cfg, log) == 0;
    ok = ok && run_cli("score " + cfg, log) == 0;
    ok = ok && run_cli("plot " + cfg, log) == 0;
    ok = ok && run_cli("loss-oracle --batch '" + (dir / "batch.jsonl").string() + "'", d / "loss.jsonl") == 0;
    o.require(ok, "a subcommand failed in run " + std::to_string(r + 1) + ": " + testutil::slurp(log));
  }
  std::size_t compared = 0;
  for (const auto& name : artefacts) {
    const auto a = runs[0] / name, b = runs[1] / name;
    if (!std::filesystem::exists(a) || !std::filesystem::exists(b)) {
      o.require(false, name + " missing");
      continue;
    }
    o.require(testutil::slurp(a) == testutil::slurp(b), name + " differs between runs");
    ++compared;
  }
  if (o.pass) o.detail << compared << " artefacts byte-identical across reruns (synth, propose with 1 and 4 jobs, label, finalize, score, plot, loss-oracle)";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "geometry properties and voxel oracle", geometry_properties},
      {2, "refinement round trip", refinement_round_trip},
      {3, "loss values", loss_values},
      {4, "jitter fixture", jitter_fixture},
      {5, "labeling matrix", labeling_matrix},
      {6, "NMS against brute force", nms_oracle},
      {7, "Hungarian matching against exhaustive search", matching_oracle},
      {8, "proposal recall on synthetic fixture", recall_fixture},
      {9, "end-to-end pipeline on clean fixture", end_to_end},
      {10, "determinism of every subcommand", determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail.str(std::string("exception: ") + e.what());
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.name << " -- "
              << o.detail.str() << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
