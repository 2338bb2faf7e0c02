// Copyright 2026 The Sensel Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sensel/combinatorics.h"

#include <algorithm>

namespace sensel {

std::uint64_t BinomialCapped(std::int64_t n, std::int64_t k, std::uint64_t cap) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  // Multiplicative formula; every intermediate value is itself a binomial
  // coefficient, so the division is exact.
  unsigned __int128 acc = 1;
  for (std::int64_t j = 1; j <= k; ++j) {
    acc = acc * static_cast<unsigned __int128>(n - k + j) / static_cast<unsigned __int128>(j);
    if (acc > cap) return cap + 1;
  }
  return static_cast<std::uint64_t>(acc);
}

void ForEachCombination(Eigen::Index n, Eigen::Index k,
                        const std::function<bool(std::span<const Eigen::Index>)>& visit) {
  if (k < 0 || k > n) return;
  std::vector<Eigen::Index> current(static_cast<size_t>(k));
  for (Eigen::Index j = 0; j < k; ++j) current[static_cast<size_t>(j)] = j;
  while (true) {
    if (!visit(current)) return;
    Eigen::Index pos = k - 1;
    while (pos >= 0 && current[static_cast<size_t>(pos)] == n - k + pos) --pos;
    if (pos < 0) return;
    ++current[static_cast<size_t>(pos)];
    for (Eigen::Index j = pos + 1; j < k; ++j) {
      current[static_cast<size_t>(j)] = current[static_cast<size_t>(j - 1)] + 1;
    }
  }
}

}  // namespace sensel
