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

#include <span>
#include <vector>

#include "actdet/ingest.hpp"
#include "actdet/proposal.hpp"

namespace actdet {

struct JitterParams {
  int stride = 15;
  /// Half-extents w; each anchor f yields frames [f - w, f + w].
  std::vector<int> half_windows{16, 32, 64, 128};
  bool clamp_to_video = true;
  /// Generated spans shorter than this (in inclusive frames) are dropped.
  int min_span = 2;
  /// Also anchor on f_end when the stride does not land on it.
  bool include_endpoint = false;

  void validate() const;

  friend bool operator==(const JitterParams&, const JitterParams&) = default;
};

/// f_st, f_st + s, ... up to f_end. f_end itself appears only when the stride
/// lands on it, unless `include_endpoint` is set.
std::vector<int> anchors(int f_st, int f_end, int stride, bool include_endpoint = false);

/// Returns the input proposals unchanged followed by their temporally
/// jittered children, ordered by parent, anchor, then window. Children keep
/// the parent's rectangle; a child whose cuboid equals one already emitted is
/// skipped. Child ids are "<parent id>/a<anchor>w<half window>".
std::vector<Proposal> jitter_proposals(std::span<const Proposal> input, const JitterParams& params,
                                       const VideoMeta& video);

}  // namespace actdet
