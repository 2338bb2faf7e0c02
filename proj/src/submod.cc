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

#include "sensel/submod.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>
#include <unordered_map>

#include "sensel/combinatorics.h"
#include "sensel/error.h"
#include "sensel/linalg.h"
#include "sensel/selectors.h"

namespace sensel {

namespace {

Eigen::MatrixXd Stack(const CandidateMatrix& cand, std::span<const Index> subset) {
  Eigen::MatrixXd c(static_cast<Index>(subset.size()), cand.r());
  for (size_t k = 0; k < subset.size(); ++k) {
    const Index i = subset[k];
    if (i < 0 || i >= cand.n()) {
      throw Error(ErrorCode::kIndexOutOfRange, "sensor " + std::to_string(i) + " out of range");
    }
    c.row(static_cast<Index>(k)) = cand.row(i);
  }
  return c;
}

Eigen::VectorXd GramEigenvalues(const Eigen::MatrixXd& c) {
  Eigen::VectorXd eig = SymmetricEigenvalues(c.transpose() * c);
  return eig.cwiseMax(0.0);
}

using Mask = std::uint64_t;

std::vector<Index> MaskToSet(Mask mask) {
  std::vector<Index> out;
  while (mask != 0) {
    out.push_back(std::countr_zero(mask));
    mask &= mask - 1;
  }
  return out;
}

// Memoized evaluation keyed by membership bitmask.
class ValueCache {
 public:
  explicit ValueCache(const SetObjective& obj) : obj_(obj) {}

  double operator()(Mask mask) {
    auto it = values_.find(mask);
    if (it != values_.end()) return it->second;
    const std::vector<Index> set = MaskToSet(mask);
    const double value = obj_.Eval(set);
    values_.emplace(mask, value);
    return value;
  }

 private:
  const SetObjective& obj_;
  std::unordered_map<Mask, double> values_;
};

void CheckEnumerable(const SetObjective& obj, const CheckOptions& options, bool with_element) {
  const Index n = obj.n();
  if (options.max_set_size < 0 || options.max_set_size > n) {
    throw Error(ErrorCode::kInvalidArgument, "max_set_size must lie in [0, n]");
  }
  if (n > 63) throw Error(ErrorCode::kInstanceTooLarge, "exhaustive checks need n <= 63");
  // Sum over |T| = t of C(n, t) (2^t - 1) (n - t or 1).
  long double total = 0.0L;
  for (Index t = 1; t <= options.max_set_size; ++t) {
    const auto choose = static_cast<long double>(BinomialCapped(n, t, kEnumerationLimit));
    const long double subsets = std::ldexp(1.0L, static_cast<int>(t)) - 1.0L;
    total += choose * subsets * (with_element ? static_cast<long double>(n - t) : 1.0L);
    if (total > static_cast<long double>(kEnumerationLimit)) {
      throw Error(ErrorCode::kInstanceTooLarge, "exhaustive check exceeds the enumeration limit");
    }
  }
}

Mask SetToMask(std::span<const Index> set) {
  Mask mask = 0;
  for (Index i : set) mask |= Mask{1} << i;
  return mask;
}

double Scale(double a, double b) { return std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

std::string_view SetKindName(SetKind kind) {
  switch (kind) {
    case SetKind::kDEps: return "D_EPS";
    case SetKind::kAEps: return "A_EPS";
    case SetKind::kERaw: return "E_RAW";
    case SetKind::kEGramRow: return "E_GRAM_ROW";
    case SetKind::kModularNorm: return "MODULAR_NORM";
  }
  return "?";
}

SetObjective::SetObjective(SetKind kind, CandidateMatrix cand, double epsilon)
    : kind_(kind), cand_(std::move(cand)), epsilon_(epsilon) {
  if ((kind == SetKind::kDEps || kind == SetKind::kAEps) && !(epsilon > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "regularized objectives need epsilon > 0");
  }
}

double SetObjective::DefaultEpsilon(const CandidateMatrix& cand) {
  return 1e-6 * cand.max_row_norm_sq();
}

double SetObjective::Eval(std::span<const Index> subset) const {
  const Index r = cand_.r();
  switch (kind_) {
    case SetKind::kAEps: {
      if (subset.empty()) return 0.0;
      // r/eps - sum 1/(lambda + eps) = sum lambda / (eps (lambda + eps)),
      // which avoids cancelling against the offset.
      const Eigen::VectorXd eig = GramEigenvalues(Stack(cand_, subset));
      double value = 0.0;
      for (Index j = 0; j < r; ++j) value += eig(j) / (epsilon_ * (eig(j) + epsilon_));
      return value;
    }
    case SetKind::kDEps: {
      if (subset.empty()) return std::pow(epsilon_, static_cast<double>(r));
      const Eigen::VectorXd eig = GramEigenvalues(Stack(cand_, subset));
      return (eig.array() + epsilon_).prod();
    }
    case SetKind::kERaw:
      if (subset.empty()) return 0.0;
      return MinEigIndex(ComputeFisherInfo(Stack(cand_, subset)));
    case SetKind::kEGramRow: {
      if (subset.empty()) return 0.0;
      const Eigen::MatrixXd c = Stack(cand_, subset);
      return SmallestEigenvalue(c * c.transpose());
    }
    case SetKind::kModularNorm: {
      double total = 0.0;
      for (Index i : subset) total += cand_.row_norms_sq()(i);
      return total;
    }
  }
  return 0.0;
}

double SetObjective::MarginalGain(std::span<const Index> subset, Index i) const {
  if (std::find(subset.begin(), subset.end(), i) != subset.end()) {
    throw Error(ErrorCode::kDuplicateSensor, "sensor " + std::to_string(i) + " already in the set");
  }
  std::vector<Index> grown(subset.begin(), subset.end());
  grown.push_back(i);
  return Eval(grown) - Eval(subset);
}

double AEpsTraceGain(const CandidateMatrix& cand, double epsilon, std::span<const Index> subset,
                     Index i) {
  const Eigen::MatrixXd c = Stack(cand, subset);
  const Eigen::MatrixXd a =
      c.transpose() * c + epsilon * Eigen::MatrixXd::Identity(cand.r(), cand.r());
  const Eigen::VectorXd u = cand.row(i).transpose();
  const Eigen::VectorXd g = SolveSpd(a, u);
  return g.squaredNorm() / (1.0 + u.dot(g));
}

ModularityReport CheckSubmodular(const SetObjective& obj, const CheckOptions& options) {
  CheckEnumerable(obj, options, /*with_element=*/true);
  const Index n = obj.n();
  ValueCache value(obj);
  ModularityReport report;
  report.tolerance = options.tolerance;
  for (Index t = 1; t <= options.max_set_size; ++t) {
    ForEachCombination(n, t, [&](std::span<const Index> tset) {
      const Mask tmask = SetToMask(tset);
      const double ft = value(tmask);
      // Proper subsets of T, from the largest submask down to the empty set.
      for (Mask smask = (tmask - 1) & tmask;; smask = (smask - 1) & tmask) {
        const double fs = value(smask);
        for (Index i = 0; i < n; ++i) {
          const Mask bit = Mask{1} << i;
          if (tmask & bit) continue;
          const double lhs = value(smask | bit) - fs;
          const double rhs = value(tmask | bit) - ft;
          ++report.checked_pairs;
          const double slack = options.tolerance * Scale(lhs, rhs);
          if (lhs - rhs < -slack) {
            ++report.submodular_violation_count;
            if (report.violations_submodular.size() < options.max_witnesses) {
              report.violations_submodular.push_back(
                  {MaskToSet(smask), MaskToSet(tmask), i, lhs, rhs});
            }
          }
          if (rhs - lhs < -slack) {
            ++report.supermodular_violation_count;
            if (report.violations_supermodular.size() < options.max_witnesses) {
              report.violations_supermodular.push_back(
                  {MaskToSet(smask), MaskToSet(tmask), i, lhs, rhs});
            }
          }
        }
        if (smask == 0) break;
      }
      return true;
    });
  }
  return report;
}

ModularityReport CheckMonotone(const SetObjective& obj, const CheckOptions& options) {
  CheckEnumerable(obj, options, /*with_element=*/false);
  const Index n = obj.n();
  ValueCache value(obj);
  ModularityReport report;
  report.tolerance = options.tolerance;
  for (Index t = 1; t <= options.max_set_size; ++t) {
    ForEachCombination(n, t, [&](std::span<const Index> tset) {
      const Mask tmask = SetToMask(tset);
      const double ft = value(tmask);
      for (Mask smask = (tmask - 1) & tmask;; smask = (smask - 1) & tmask) {
        if (std::popcount(smask) >= options.min_set_size) {
          const double fs = value(smask);
          ++report.checked_pairs;
          if (fs - ft > options.tolerance * Scale(fs, ft)) {
            ++report.monotone_violation_count;
            if (report.violations_monotone.size() < options.max_witnesses) {
              report.violations_monotone.push_back({MaskToSet(smask), MaskToSet(tmask), -1, fs, ft});
            }
          }
        }
        if (smask == 0) break;
      }
      return true;
    });
  }
  return report;
}

Eigen::MatrixXd CounterexampleMatrix() {
  Eigen::MatrixXd u(6, 3);
  u << 0.2, -0.1, -0.2,
      -0.5, -0.1, 0.2,
      -0.2, 0.3, 0.2,
      -0.5, 0.3, -0.3,
      -0.4, -0.3, -0.4,
      0.3, 0.0, 0.0;
  return u;
}

CounterexampleReport MakeCounterexampleReport() {
  const SetObjective obj(SetKind::kERaw, CandidateMatrix(CounterexampleMatrix()));
  auto lambda = [&obj](std::initializer_list<Index> rows) {
    const std::vector<Index> set(rows);
    return obj.Eval(set);
  };
  CounterexampleReport out;
  out.c3 = lambda({0, 1, 2});
  out.c3p = lambda({0, 1, 2, 4});
  out.c4 = lambda({0, 1, 2, 3});
  out.c4p = lambda({0, 1, 2, 3, 4});
  out.c4pp = lambda({0, 1, 2, 3, 5});
  out.c5 = lambda({0, 1, 2, 3, 4});
  out.c5pp = lambda({0, 1, 2, 3, 4, 5});
  out.first_lhs = out.c3p - out.c3;
  out.first_rhs = out.c4p - out.c4;
  out.first_holds = out.first_lhs > out.first_rhs;
  out.second_lhs = out.c4pp - out.c4;
  out.second_rhs = out.c5pp - out.c5;
  out.second_holds = out.second_lhs < out.second_rhs;

  CheckOptions options;
  options.max_set_size = 5;
  const ModularityReport report = CheckSubmodular(obj, options);
  out.submodular_violations = report.submodular_violation_count;
  out.supermodular_violations = report.supermodular_violation_count;
  out.neither_sub_nor_supermodular =
      report.submodular_violation_count > 0 && report.supermodular_violation_count > 0;
  return out;
}

NemhauserResult NemhauserCheck(const CandidateMatrix& cand, Index p, double epsilon) {
  const SetObjective obj(SetKind::kAEps, cand, epsilon);
  NemhauserResult out;
  out.greedy_indices = SelectAG(cand, p).indices;
  out.greedy_value = obj.Eval(out.greedy_indices);
  const auto optimum = ExhaustiveSearch(
      cand.n(), p, ArgBest::Sense::kMax,
      [&obj](std::span<const Index> subset) -> std::optional<double> { return obj.Eval(subset); });
  out.optimal_indices = optimum->indices;
  out.opt_value = optimum->value;
  out.ratio = out.opt_value > 0.0 ? out.greedy_value / out.opt_value : 1.0;
  out.bound_holds = out.ratio >= 1.0 - 1.0 / std::numbers::e - 1e-9;
  return out;
}

namespace {

std::string JoinSet(const std::vector<Index>& set) {
  std::string out;
  for (size_t k = 0; k < set.size(); ++k) {
    if (k) out += ' ';
    out += std::to_string(set[k]);
  }
  return out;
}

void WriteWitnessRows(std::ostream& os, std::string_view kind, const std::vector<Witness>& list) {
  char buffer[64];
  for (const Witness& w : list) {
    os << kind << ',' << JoinSet(w.s) << ',' << JoinSet(w.t) << ',';
    if (w.i >= 0) os << w.i;
    std::snprintf(buffer, sizeof(buffer), ",%.17g", w.lhs);
    os << buffer;
    std::snprintf(buffer, sizeof(buffer), ",%.17g\n", w.rhs);
    os << buffer;
  }
}

}  // namespace

void WriteReportText(std::ostream& os, std::string_view title, const ModularityReport& report) {
  os << title << '\n'
     << "  checked: " << report.checked_pairs << '\n'
     << "  tolerance: " << report.tolerance << '\n'
     << "  submodularity violations: " << report.submodular_violation_count << '\n'
     << "  supermodularity violations: " << report.supermodular_violation_count << '\n'
     << "  monotonicity violations: " << report.monotone_violation_count << '\n';
}

void WriteReportCsv(std::ostream& os, const ModularityReport& report) {
  os << "kind,s,t,i,lhs,rhs\n";
  WriteWitnessRows(os, "submodular", report.violations_submodular);
  WriteWitnessRows(os, "supermodular", report.violations_supermodular);
  WriteWitnessRows(os, "monotone", report.violations_monotone);
}

void WriteCounterexampleText(std::ostream& os, const CounterexampleReport& r) {
  char line[160];
  auto put = [&](const char* label, double value) {
    std::snprintf(line, sizeof(line), "  %-28s %.17g\n", label, value);
    os << line;
  };
  os << "lambda_min counterexample (6 x 3 candidate matrix)\n";
  put("lambda_min C3 [u1..u3]", r.c3);
  put("lambda_min C3 + u5", r.c3p);
  put("lambda_min C4 [u1..u4]", r.c4);
  put("lambda_min C4 + u5", r.c4p);
  put("lambda_min C4 + u6", r.c4pp);
  put("lambda_min C5 [u1..u5]", r.c5);
  put("lambda_min C5 + u6", r.c5pp);
  std::snprintf(line, sizeof(line), "  (C3+u5)-C3 > (C4+u5)-C4 : %.17g > %.17g -> %s\n", r.first_lhs,
                r.first_rhs, r.first_holds ? "true" : "false");
  os << line;
  std::snprintf(line, sizeof(line), "  (C4+u6)-C4 < (C5+u6)-C5 : %.17g < %.17g -> %s\n",
                r.second_lhs, r.second_rhs, r.second_holds ? "true" : "false");
  os << line;
  os << "  exhaustive E_RAW check: " << r.submodular_violations << " submodularity and "
     << r.supermodular_violations << " supermodularity violations -> "
     << (r.neither_sub_nor_supermodular ? "neither submodular nor supermodular" : "inconclusive")
     << '\n';
}

}  // namespace sensel
