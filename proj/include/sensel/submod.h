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

#ifndef SENSEL_SUBMOD_H_
#define SENSEL_SUBMOD_H_

// Sensor-selection objectives viewed as set functions f: 2^{0..n-1} -> R,
// with exhaustive checkers for submodularity
//   f(S + i) - f(S) >= f(T + i) - f(T)   for S subset of T, i not in T
// and monotonicity
//   f(S) <= f(T)                         for S subset of T.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sensel/fisher.h"

namespace sensel {

enum class SetKind {
  kDEps,          // det(C^T C + eps I)
  kAEps,          // -tr[(C^T C + eps I)^{-1}] + r / eps, zero on the empty set
  kERaw,          // lambda_min of the regime information matrix, 0 on the empty set
  kEGramRow,      // lambda_min(C C^T) for every size, 0 on the empty set
  kModularNorm,   // sum of squared row norms
};

std::string_view SetKindName(SetKind kind);

class SetObjective {
 public:
  // Throws InvalidArgument when epsilon <= 0 for kDEps or kAEps.
  SetObjective(SetKind kind, CandidateMatrix cand, double epsilon = 0.0);

  // 1e-6 times the largest squared row norm.
  static double DefaultEpsilon(const CandidateMatrix& cand);

  SetKind kind() const { return kind_; }
  double epsilon() const { return epsilon_; }
  const CandidateMatrix& candidates() const { return cand_; }
  Index n() const { return cand_.n(); }

  double Eval(std::span<const Index> subset) const;

  // Eval(S + i) - Eval(S). Throws DuplicateSensor when i is already in S.
  double MarginalGain(std::span<const Index> subset, Index i) const;

 private:
  SetKind kind_;
  CandidateMatrix cand_;
  double epsilon_;
};

// tr(A^{-1} - B^{-1}) with A = C_S^T C_S + eps I and B = A + u_i^T u_i,
// evaluated as ||A^{-1} u_i^T||^2 / (1 + u_i A^{-1} u_i^T).
double AEpsTraceGain(const CandidateMatrix& cand, double epsilon, std::span<const Index> subset,
                     Index i);

struct Witness {
  std::vector<Index> s;
  std::vector<Index> t;
  Index i = -1;       // -1 for monotonicity witnesses
  double lhs = 0.0;   // f(S + i) - f(S), or f(S)
  double rhs = 0.0;   // f(T + i) - f(T), or f(T)
};

struct ModularityReport {
  std::uint64_t checked_pairs = 0;
  std::uint64_t submodular_violation_count = 0;
  std::uint64_t supermodular_violation_count = 0;
  std::uint64_t monotone_violation_count = 0;
  // At most CheckOptions::max_witnesses of each are kept, in enumeration order.
  std::vector<Witness> violations_submodular;
  std::vector<Witness> violations_supermodular;
  std::vector<Witness> violations_monotone;
  double tolerance = 0.0;
};

struct CheckOptions {
  Index max_set_size = 0;  // |T| <= max_set_size
  Index min_set_size = 0;  // |S| >= min_set_size (monotone check only)
  double tolerance = 1e-9;
  std::size_t max_witnesses = 1000;
};

// Every (S, T, i) with S a proper subset of T, |T| <= max_set_size, i not in
// T. A violation means lhs - rhs < -tol * max(1, |lhs|, |rhs|) (submodular)
// or rhs - lhs < -tol * max(1, |lhs|, |rhs|) (supermodular).
// Throws InstanceTooLarge past kEnumerationLimit triples.
ModularityReport CheckSubmodular(const SetObjective& obj, const CheckOptions& options);

// Every proper nested pair S, T with min_set_size <= |S| and |T| <= max_set_size.
ModularityReport CheckMonotone(const SetObjective& obj, const CheckOptions& options);

// The six-row, rank-three candidate matrix used to show that lambda_min is
// neither submodular nor supermodular.
Eigen::MatrixXd CounterexampleMatrix();

struct CounterexampleReport {
  // lambda_min of the regime information matrix of each row set (1-based row
  // labels as in C_k = [u_1; ...; u_k]).
  double c3 = 0.0;     // u1..u3
  double c3p = 0.0;    // u1..u3, u5
  double c4 = 0.0;     // u1..u4
  double c4p = 0.0;    // u1..u4, u5 (same rows as c5)
  double c4pp = 0.0;   // u1..u4, u6
  double c5 = 0.0;     // u1..u5
  double c5pp = 0.0;   // u1..u6
  // Diminishing-returns reading: c3p - c3 > c4p - c4.
  double first_lhs = 0.0, first_rhs = 0.0;
  bool first_holds = false;
  // Increasing-returns reading: c4pp - c4 < c5pp - c5.
  double second_lhs = 0.0, second_rhs = 0.0;
  bool second_holds = false;
  // Exhaustive check of kERaw on the same matrix.
  std::uint64_t submodular_violations = 0;
  std::uint64_t supermodular_violations = 0;
  bool neither_sub_nor_supermodular = false;
};

CounterexampleReport MakeCounterexampleReport();

struct NemhauserResult {
  std::vector<Index> greedy_indices;
  std::vector<Index> optimal_indices;
  double greedy_value = 0.0;
  double opt_value = 0.0;
  double ratio = 0.0;
  bool bound_holds = false;  // ratio >= 1 - 1/e - 1e-9
};

// AG's selection scored with kAEps against the exhaustive kAEps maximum.
NemhauserResult NemhauserCheck(const CandidateMatrix& cand, Index p, double epsilon);

// Plain-text summaries and witness CSV (kind,s,t,i,lhs,rhs; sets as
// space-separated zero-based indices).
void WriteReportText(std::ostream& os, std::string_view title, const ModularityReport& report);
void WriteReportCsv(std::ostream& os, const ModularityReport& report);
void WriteCounterexampleText(std::ostream& os, const CounterexampleReport& report);

}  // namespace sensel

#endif  // SENSEL_SUBMOD_H_
