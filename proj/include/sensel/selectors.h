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

#ifndef SENSEL_SELECTORS_H_
#define SENSEL_SELECTORS_H_

// Sensor selectors. The greedy methods add one sensor per step:
//
//   DG  D-optimality. The first min(p, r) sensors are the pivots of a
//       column-pivoted QR of U^T (max residual norm after Gram-Schmidt
//       deflation); later sensors maximize det(C^T C) through the rank-one
//       ratio 1 + u (C^T C)^{-1} u^T.
//   AG  A-optimality. Minimizes the increase of tr[(C C^T)^{-1}] while
//       p <= r and the decrease of tr[(C^T C)^{-1}] afterwards, using
//       block-inverse and Sherman-Morrison expansions of the cached inverse.
//   EG  E-optimality. Maximizes lambda_min of the grown Gram matrix with a
//       dense symmetric eigensolve per candidate.
//
// All argmin/argmax scans break ties toward the lowest candidate index
// (see ArgBest).

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sensel/combinatorics.h"
#include "sensel/fisher.h"

namespace sensel {

enum class Method { kDG, kAG, kEG, kRandom, kBrute, kDC };

enum class Criterion { kD, kA, kE };

std::string_view MethodName(Method method);
std::optional<Method> ParseMethod(std::string_view name);

struct SelectionResult {
  Method method;
  std::vector<Index> indices;              // in selection order
  std::vector<double> per_step_objective;  // objective after each step
  double wall_time_s = 0.0;
};

SelectionResult SelectDG(const CandidateMatrix& cand, Index p);
SelectionResult SelectAG(const CandidateMatrix& cand, Index p);
SelectionResult SelectEG(const CandidateMatrix& cand, Index p);

// Uniform sampling without replacement (partial Fisher-Yates on Rng(seed)).
// per_step_objective holds the D index of every prefix.
SelectionResult SelectRandom(const CandidateMatrix& cand, Index p, std::uint64_t seed);

// Exact optimum of the criterion over all p-subsets; ties go to the
// lexicographically smallest subset. Throws InstanceTooLarge beyond
// kEnumerationLimit subsets.
SelectionResult SelectBruteForce(const CandidateMatrix& cand, Index p, Criterion criterion);

// Dispatch. kBrute uses the D criterion; kDC throws NotImplemented.
SelectionResult Select(Method method, const CandidateMatrix& cand, Index p,
                       std::uint64_t seed = 0);

struct SubsetOptimum {
  std::vector<Index> indices;
  double value;
};

// Exhaustive search over the p-subsets of {0..n-1} in lexicographic order.
// `objective` returns nullopt for subsets that must be skipped. Returns
// nullopt when every subset was skipped.
std::optional<SubsetOptimum> ExhaustiveSearch(
    Index n, Index p, ArgBest::Sense sense,
    const std::function<std::optional<double>(std::span<const Index>)>& objective);

}  // namespace sensel

#endif  // SENSEL_SELECTORS_H_
