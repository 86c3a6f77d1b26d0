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

#include "actdet/hungarian.hpp"

#include <algorithm>
#include <limits>

namespace actdet {

// Shortest augmenting path formulation of the Hungarian method with row and
// column potentials, O(n^3) on the square padding of the input.
std::vector<int> max_weight_assignment(const std::vector<std::vector<double>>& weights) {
  const std::size_t rows = weights.size();
  if (rows == 0) return {};
  const std::size_t cols = weights.front().size();
  const std::size_t n = std::max(rows, cols);
  if (cols == 0) return std::vector<int>(rows, -1);

  double max_w = 0.0;
  for (const auto& r : weights) {
    for (double w : r) max_w = std::max(max_w, w);
  }
  // Minimise max_w - w over the padded square; padding costs max_w (weight 0).
  auto cost = [&](std::size_t r, std::size_t c) {
    const double w = (r < rows && c < cols) ? weights[r][c] : 0.0;
    return max_w - w;
  };

  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based arrays; index 0 is the virtual root.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match_col(n + 1, 0), way(n + 1, 0);
  for (std::size_t r = 1; r <= n; ++r) {
    match_col[0] = r;
    std::size_t c0 = 0;
    std::vector<double> min_v(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[c0] = 1;
      const std::size_t r0 = match_col[c0];
      double delta = kInf;
      std::size_t c1 = 0;
      for (std::size_t c = 1; c <= n; ++c) {
        if (used[c]) continue;
        const double cur = cost(r0 - 1, c - 1) - u[r0] - v[c];
        if (cur < min_v[c]) {
          min_v[c] = cur;
          way[c] = c0;
        }
        if (min_v[c] < delta) {
          delta = min_v[c];
          c1 = c;
        }
      }
      for (std::size_t c = 0; c <= n; ++c) {
        if (used[c]) {
          u[match_col[c]] += delta;
          v[c] -= delta;
        } else {
          min_v[c] -= delta;
        }
      }
      c0 = c1;
    } while (match_col[c0] != 0);
    do {
      const std::size_t c1 = way[c0];
      match_col[c0] = match_col[c1];
      c0 = c1;
    } while (c0 != 0);
  }

  std::vector<int> out(rows, -1);
  for (std::size_t c = 1; c <= n; ++c) {
    const std::size_t r = match_col[c];
    if (r >= 1 && r <= rows && c <= cols) out[r - 1] = static_cast<int>(c - 1);
  }
  return out;
}

}  // namespace actdet
