// Copyright 2026 The text2mdt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TEXT2MDT_EDIT_DISTANCE_HPP
#define TEXT2MDT_EDIT_DISTANCE_HPP

#include <algorithm>
#include <cstddef>
#include <ranges>
#include <vector>

namespace text2mdt {

/// Insert/delete edit distance (unit costs, no substitution) between two
/// sequences of indivisible elements.
template <std::ranges::random_access_range A, std::ranges::random_access_range B>
std::size_t edit_distance(const A& a, const B& b) {
  const std::size_t n = std::ranges::size(a);
  const std::size_t m = std::ranges::size(b);
  if (n == 0) return m;
  if (m == 0) return n;
  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
  auto ai = std::ranges::begin(a);
  auto b0 = std::ranges::begin(b);
  for (std::size_t i = 1; i <= n; ++i, ++ai) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      if (*ai == b0[j - 1])
        cur[j] = prev[j - 1];
      else
        cur[j] = std::min(prev[j], cur[j - 1]) + 1;
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

/// One DP row over a fixed target sequence, extended one source element at a
/// time. Used to share prefix work across permutations.
template <typename T>
class EditDistanceRow {
 public:
  explicit EditDistanceRow(const std::vector<T>& target) : target_(&target), row_(target.size() + 1) {
    for (std::size_t j = 0; j < row_.size(); ++j) row_[j] = j;
  }

  EditDistanceRow extended(const T& x) const {
    EditDistanceRow next(*this);
    next.row_[0] = row_[0] + 1;
    for (std::size_t j = 1; j < row_.size(); ++j) {
      if (x == (*target_)[j - 1])
        next.row_[j] = row_[j - 1];
      else
        next.row_[j] = std::min(row_[j], next.row_[j - 1]) + 1;
    }
    return next;
  }

  std::size_t distance() const { return row_.back(); }

  /// Lower bound on the final distance once `remaining` more source elements
  /// are appended: any alignment leaving cell j still has to absorb the length
  /// difference of what is left on both sides.
  std::size_t lower_bound(std::size_t remaining) const {
    const std::size_t m = row_.size() - 1;
    std::size_t best = static_cast<std::size_t>(-1);
    for (std::size_t j = 0; j <= m; ++j) {
      const std::size_t left = m - j;
      const std::size_t gap = left > remaining ? left - remaining : remaining - left;
      best = std::min(best, row_[j] + gap);
    }
    return best;
  }

 private:
  const std::vector<T>* target_;
  std::vector<std::size_t> row_;
};

}  // namespace text2mdt

#endif  // TEXT2MDT_EDIT_DISTANCE_HPP
