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

#include "actdet/jitter.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "actdet/errors.hpp"

namespace actdet {

void JitterParams::validate() const {
  if (stride < 1) throw ValidationError("jitter stride must be at least 1");
  if (half_windows.empty()) throw ValidationError("jitter half_windows must not be empty");
  for (std::size_t i = 0; i < half_windows.size(); ++i) {
    if (half_windows[i] < 1) throw ValidationError("jitter half_windows must be positive");
    if (i > 0 && half_windows[i] <= half_windows[i - 1]) {
      throw ValidationError("jitter half_windows must be strictly increasing");
    }
  }
  if (min_span < 1) throw ValidationError("jitter min_span must be at least 1");
}

std::vector<int> anchors(int f_st, int f_end, int stride, bool include_endpoint) {
  std::vector<int> out;
  if (f_st > f_end || stride < 1) return out;
  for (long f = f_st; f <= f_end; f += stride) out.push_back(static_cast<int>(f));
  if (include_endpoint && out.back() != f_end) out.push_back(f_end);
  return out;
}

namespace {

struct CuboidLess {
  bool operator()(const Cuboid& a, const Cuboid& b) const { return canonical_less(a, b); }
};

}  // namespace

std::vector<Proposal> jitter_proposals(std::span<const Proposal> input, const JitterParams& params,
                                       const VideoMeta& video) {
  params.validate();
  std::vector<Proposal> out(input.begin(), input.end());
  std::set<Cuboid, CuboidLess> seen;
  for (const auto& p : input) seen.insert(p.cuboid);

  const int last_frame = video.num_frames - 1;
  for (const auto& parent : input) {
    for (int f : anchors(parent.cuboid.f_start, parent.cuboid.f_end, params.stride,
                         params.include_endpoint)) {
      for (int w : params.half_windows) {
        Cuboid c = parent.cuboid;
        c.f_start = f - w;
        c.f_end = f + w;
        if (params.clamp_to_video) {
          c.f_start = std::max(c.f_start, 0);
          c.f_end = std::min(c.f_end, last_frame);
        }
        if (c.f_end - c.f_start + 1 < params.min_span) continue;
        if (!seen.insert(c).second) continue;
        Proposal child;
        child.id = parent.id + "/a" + std::to_string(f) + "w" + std::to_string(w);
        child.video_id = parent.video_id;
        child.parent_id = parent.id;
        child.provenance = Provenance::jittering;
        child.cuboid = c;
        out.push_back(std::move(child));
      }
    }
  }
  return out;
}

}  // namespace actdet
