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

#include <vector>

namespace actdet {

/// Maximum-weight assignment on a rectangular weight matrix (rows x cols,
/// row-major, all rows the same length). Returns, for every row, the matched
/// column or -1. Weights must be finite; a zero-weight pairing is reported
/// like any other, callers decide whether it counts.
std::vector<int> max_weight_assignment(const std::vector<std::vector<double>>& weights);

}  // namespace actdet
