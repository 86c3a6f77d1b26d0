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

#include <string>
#include <string_view>

#include "actdet/geometry.hpp"

namespace actdet {

enum class Provenance { clustering, jittering };

std::string_view to_string(Provenance p);
/// Throws ValidationError on an unknown name.
Provenance parse_provenance(std::string_view name);

/// A class-agnostic cuboid hypothesised to contain an action.
struct Proposal {
  std::string id;
  std::string video_id;
  /// Empty for proposals produced directly by clustering.
  std::string parent_id;
  Provenance provenance = Provenance::clustering;
  Cuboid cuboid;

  friend bool operator==(const Proposal&, const Proposal&) = default;
};

}  // namespace actdet
