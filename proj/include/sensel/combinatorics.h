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

#ifndef SENSEL_COMBINATORICS_H_
#define SENSEL_COMBINATORICS_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace sensel {

// Largest subset count any exhaustive search in the library will enumerate.
inline constexpr std::uint64_t kEnumerationLimit = 10'000'000;

// C(n, k), saturating at `cap` + 1 so callers can compare against a guard
// without overflow.
std::uint64_t BinomialCapped(std::int64_t n, std::int64_t k, std::uint64_t cap);

// Visits every k-subset of {0..n-1} in lexicographic order. The visitor
// returns false to stop early.
void ForEachCombination(Eigen::Index n, Eigen::Index k,
                        const std::function<bool(std::span<const Eigen::Index>)>& visit);

// Ties within a relative 1e-12 go to the candidate offered first, which is
// the lowest index whenever candidates are offered in increasing order.
class ArgBest {
 public:
  enum class Sense { kMax, kMin };

  explicit ArgBest(Sense sense) : sense_(sense) {}

  void Offer(Eigen::Index index, double value) {
    if (!has_value_) {
      index_ = index;
      value_ = value;
      has_value_ = true;
      return;
    }
    const double gain = sense_ == Sense::kMax ? value - value_ : value_ - value;
    const double scale = std::max(std::abs(value), std::abs(value_));
    if (gain > kRelativeTie * scale) {
      index_ = index;
      value_ = value;
    }
  }

  bool has_value() const { return has_value_; }
  Eigen::Index index() const { return index_; }
  double value() const { return value_; }

  static constexpr double kRelativeTie = 1e-12;

 private:
  Sense sense_;
  bool has_value_ = false;
  Eigen::Index index_ = -1;
  double value_ = 0.0;
};

}  // namespace sensel

#endif  // SENSEL_COMBINATORICS_H_
