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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "oracles.h"
#include "sensel/data.h"
#include "sensel/error.h"
#include "sensel/selectors.h"

namespace sensel {
namespace {

using oracle::Rows;

// -tr[(C^T C + eps I)^{-1}] + r / eps by Gauss-Jordan in long double.
long double AEpsOracle(const Eigen::MatrixXd& u, const std::vector<Index>& s, long double eps) {
  const Index r = u.cols();
  oracle::Mat a(static_cast<size_t>(r), std::vector<long double>(static_cast<size_t>(r), 0.0L));
  for (Index i = 0; i < r; ++i) a[i][i] = eps;
  for (Index k : s) {
    for (Index i = 0; i < r; ++i) {
      for (Index j = 0; j < r; ++j) a[i][j] += static_cast<long double>(u(k, i)) * u(k, j);
    }
  }
  return -oracle::Trace(oracle::GaussJordanInverse(a)) + static_cast<long double>(r) / eps;
}

TEST(SetObjectiveTest, EmptySetValues) {
  const CandidateMatrix c(CounterexampleMatrix());
  const std::vector<Index> empty;
  EXPECT_EQ(SetObjective(SetKind::kAEps, c, 1e-3).Eval(empty), 0.0);
  EXPECT_NEAR(SetObjective(SetKind::kDEps, c, 0.5).Eval(empty), 0.125, 1e-15);
  EXPECT_EQ(SetObjective(SetKind::kERaw, c).Eval(empty), 0.0);
  EXPECT_EQ(SetObjective(SetKind::kModularNorm, c).Eval(empty), 0.0);
}

TEST(SetObjectiveTest, RequiresPositiveEpsilon) {
  const CandidateMatrix c(CounterexampleMatrix());
  EXPECT_THROW(SetObjective(SetKind::kAEps, c, 0.0), Error);
  EXPECT_THROW(SetObjective(SetKind::kDEps, c, -1.0), Error);
  EXPECT_NO_THROW(SetObjective(SetKind::kERaw, c, 0.0));
}

TEST(SetObjectiveTest, DefaultEpsilonScalesWithRows) {
  const CandidateMatrix c(CounterexampleMatrix());
  EXPECT_DOUBLE_EQ(SetObjective::DefaultEpsilon(c), 1e-6 * c.max_row_norm_sq());
}

TEST(SetObjectiveTest, AEpsOnIdentityRows) {
  const CandidateMatrix c(Eigen::MatrixXd::Identity(3, 3));
  const double eps = 0.25;
  const std::vector<Index> all = {0, 1, 2};
  EXPECT_NEAR(SetObjective(SetKind::kAEps, c, eps).Eval(all), -3 / (1 + eps) + 3 / eps, 1e-12);
}

TEST(SetObjectiveTest, AEpsMatchesGaussJordan) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const CandidateMatrix c = GenRandomSystem(7, 3, seed);
    for (double eps : {1e-3, 1e-1, 1.0}) {
      const SetObjective obj(SetKind::kAEps, c, eps);
      for (const std::vector<Index>& s :
           {std::vector<Index>{0}, std::vector<Index>{1, 4}, std::vector<Index>{0, 2, 3, 6}}) {
        const double expected = static_cast<double>(AEpsOracle(c.rows(), s, eps));
        EXPECT_NEAR(obj.Eval(s), expected, 1e-12 * (3 / eps));
      }
    }
  }
}

TEST(SetObjectiveTest, DEpsMatchesCofactor) {
  const CandidateMatrix c = GenRandomSystem(6, 3, 3);
  const SetObjective obj(SetKind::kDEps, c, 0.1);
  const std::vector<Index> s = {1, 3};
  Eigen::MatrixXd a = Rows(c.rows(), s).transpose() * Rows(c.rows(), s);
  a.diagonal().array() += 0.1;
  const double expected = static_cast<double>(oracle::CofactorDet(oracle::ToMat(a)));
  EXPECT_NEAR(obj.Eval(s), expected, 1e-12 * expected);
}

TEST(SetObjectiveTest, ERawUsesRegimeMatrix) {
  const CandidateMatrix c(CounterexampleMatrix());
  const SetObjective raw(SetKind::kERaw, c);
  const SetObjective row(SetKind::kEGramRow, c);
  const std::vector<Index> two = {0, 1};
  const std::vector<Index> five = {0, 1, 2, 3, 4};
  EXPECT_NEAR(raw.Eval(two), static_cast<double>(oracle::MinEigOf(Rows(c.rows(), two))), 1e-12);
  EXPECT_NEAR(raw.Eval(five), static_cast<double>(oracle::MinEigOf(Rows(c.rows(), five))), 1e-12);
  // C C^T of five rank-three rows is singular.
  EXPECT_NEAR(row.Eval(five), 0.0, 1e-12);
}

TEST(MarginalGainTest, AEpsGainMatchesEvalDifferenceAndWoodbury) {
  const CandidateMatrix c(CounterexampleMatrix());
  const double eps = 1e-3;
  const SetObjective obj(SetKind::kAEps, c, eps);
  const std::vector<Index> s = {0, 1};
  const double gain = obj.MarginalGain(s, 2);
  EXPECT_GT(gain, 0.0);
  std::vector<Index> si = s;
  si.push_back(2);
  const double direct = static_cast<double>(AEpsOracle(c.rows(), si, eps) - AEpsOracle(c.rows(), s, eps));
  EXPECT_NEAR(gain, direct, 1e-10 * std::abs(direct));
  EXPECT_NEAR(AEpsTraceGain(c, eps, s, 2), direct, 1e-10 * std::abs(direct));
}

TEST(MarginalGainTest, ZeroRowAddsNothing) {
  Eigen::MatrixXd u = Eigen::MatrixXd::Identity(3, 2);
  u.row(2).setZero();
  const SetObjective obj(SetKind::kAEps, CandidateMatrix(u), 1e-2);
  EXPECT_EQ(obj.MarginalGain(std::vector<Index>{}, 2), 0.0);
}

TEST(MarginalGainTest, RejectsMember) {
  const SetObjective obj(SetKind::kModularNorm, CandidateMatrix(CounterexampleMatrix()));
  try {
    obj.MarginalGain(std::vector<Index>{1, 2}, 2);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicateSensor);
  }
}

TEST(WoodburyTest, BlockUpdateMatchesDirectInverse) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Eigen::MatrixXd u = GenRandomSystem(6, 3, 50 + seed).rows();
    Eigen::MatrixXd a = u.topRows(2).transpose() * u.topRows(2);
    a.diagonal().array() += 1e-2;
    const Eigen::MatrixXd d = u.bottomRows(3);
    const Eigen::MatrixXd a_inv = oracle::FromMat(oracle::GaussJordanInverse(oracle::ToMat(a)));
    const Eigen::MatrixXd inner = Eigen::MatrixXd::Identity(3, 3) + d * a_inv * d.transpose();
    const Eigen::MatrixXd woodbury =
        a_inv - a_inv * d.transpose() *
                    oracle::FromMat(oracle::GaussJordanInverse(oracle::ToMat(inner))) * d * a_inv;
    const Eigen::MatrixXd direct =
        oracle::FromMat(oracle::GaussJordanInverse(oracle::ToMat(a + d.transpose() * d)));
    EXPECT_LE((woodbury - direct).norm(), 1e-9 * direct.norm());
  }
}

TEST(CheckTest, TripleCountOnSixRows) {
  const SetObjective obj(SetKind::kModularNorm, CandidateMatrix(CounterexampleMatrix()));
  CheckOptions opt;
  opt.max_set_size = 5;
  // sum over |T| = t of C(6, t) (2^t - 1) (6 - t).
  EXPECT_EQ(CheckSubmodular(obj, opt).checked_pairs, 30u + 180u + 420u + 450u + 186u);
}

TEST(CheckTest, ModularFunctionHasNoViolations) {
  const SetObjective obj(SetKind::kModularNorm, GenRandomSystem(7, 3, 4));
  CheckOptions opt;
  opt.max_set_size = 6;
  const ModularityReport sub = CheckSubmodular(obj, opt);
  EXPECT_EQ(sub.submodular_violation_count, 0u);
  EXPECT_EQ(sub.supermodular_violation_count, 0u);
  EXPECT_EQ(CheckMonotone(obj, opt).monotone_violation_count, 0u);
}

TEST(CheckTest, AEpsIsMonotone) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SetObjective obj(SetKind::kAEps, GenRandomSystem(7, 3, 60 + seed), 1e-3);
    CheckOptions opt;
    opt.max_set_size = 7;
    EXPECT_EQ(CheckMonotone(obj, opt).monotone_violation_count, 0u);
  }
}

TEST(CheckTest, AEpsDiminishingReturnsFailsOnEmbeddedMatrix) {
  // S = {0}, T = {0, 1}, i = 3: the gain of row 3 grows when row 1 is present.
  const Eigen::MatrixXd u = CounterexampleMatrix();
  const long double eps = 1e-3L;
  auto f = [&](std::vector<Index> s) { return AEpsOracle(u, s, eps); };
  const long double lhs = f({0, 3}) - f({0});
  const long double rhs = f({0, 1, 3}) - f({0, 1});
  EXPECT_LT(lhs, rhs);

  const SetObjective obj(SetKind::kAEps, CandidateMatrix(u), 1e-3);
  CheckOptions opt;
  opt.max_set_size = 5;
  const ModularityReport report = CheckSubmodular(obj, opt);
  EXPECT_GT(report.submodular_violation_count, 0u);
  bool found = false;
  for (const Witness& w : report.violations_submodular) {
    if (w.s == std::vector<Index>{0} && w.t == std::vector<Index>{0, 1} && w.i == 3) {
      found = true;
      EXPECT_NEAR(w.lhs, static_cast<double>(lhs), 1e-9 * w.lhs);
      EXPECT_NEAR(w.rhs, static_cast<double>(rhs), 1e-9 * w.rhs);
    }
  }
  EXPECT_TRUE(found);
}

TEST(CheckTest, WitnessListIsCapped) {
  const SetObjective obj(SetKind::kERaw, CandidateMatrix(CounterexampleMatrix()));
  CheckOptions opt;
  opt.max_set_size = 5;
  opt.max_witnesses = 3;
  const ModularityReport report = CheckSubmodular(obj, opt);
  EXPECT_GT(report.submodular_violation_count, 3u);
  EXPECT_EQ(report.violations_submodular.size(), 3u);
}

TEST(CheckTest, GuardsAgainstLargeGroundSets) {
  const SetObjective obj(SetKind::kModularNorm, GenRandomSystem(40, 2, 1));
  CheckOptions opt;
  opt.max_set_size = 20;
  try {
    CheckSubmodular(obj, opt);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInstanceTooLarge);
  }
}

TEST(CounterexampleTest, EigenvaluesMatchOracle) {
  const Eigen::MatrixXd u = CounterexampleMatrix();
  ASSERT_EQ(u.rows(), 6);
  ASSERT_EQ(u.cols(), 3);
  const CounterexampleReport rep = MakeCounterexampleReport();
  auto lam = [&](std::vector<Index> s) {
    return static_cast<double>(oracle::SmallestEigenvalue3(oracle::RegimeGram(Rows(u, s))));
  };
  EXPECT_NEAR(rep.c3, lam({0, 1, 2}), 1e-12);
  EXPECT_NEAR(rep.c3p, lam({0, 1, 2, 4}), 1e-12);
  EXPECT_NEAR(rep.c4, lam({0, 1, 2, 3}), 1e-12);
  EXPECT_NEAR(rep.c4p, lam({0, 1, 2, 3, 4}), 1e-12);
  EXPECT_NEAR(rep.c4pp, lam({0, 1, 2, 3, 5}), 1e-12);
  EXPECT_NEAR(rep.c5, rep.c4p, 1e-15);
  EXPECT_NEAR(rep.c5pp, lam({0, 1, 2, 3, 4, 5}), 1e-12);
  EXPECT_DOUBLE_EQ(rep.first_lhs, rep.c3p - rep.c3);
  EXPECT_DOUBLE_EQ(rep.first_rhs, rep.c4p - rep.c4);
  EXPECT_DOUBLE_EQ(rep.second_lhs, rep.c4pp - rep.c4);
  EXPECT_DOUBLE_EQ(rep.second_rhs, rep.c5pp - rep.c5);
  EXPECT_EQ(rep.first_holds, rep.first_lhs > rep.first_rhs);
  EXPECT_EQ(rep.second_holds, rep.second_lhs < rep.second_rhs);
}

TEST(CounterexampleTest, MinEigenvalueIsNeitherSubNorSupermodular) {
  const CounterexampleReport rep = MakeCounterexampleReport();
  EXPECT_GT(rep.submodular_violations, 0u);
  EXPECT_GT(rep.supermodular_violations, 0u);
  EXPECT_TRUE(rep.neither_sub_nor_supermodular);
}

TEST(NemhauserTest, RatioWithinBound) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const CandidateMatrix c = GenRandomSystem(12, 3, 70 + seed);
    const NemhauserResult res = NemhauserCheck(c, 3, 1e-3);
    EXPECT_LE(res.ratio, 1.0 + 1e-12);
    EXPECT_GE(res.ratio, 1.0 - 1.0 / std::numbers::e);
    EXPECT_TRUE(res.bound_holds);
    EXPECT_EQ(res.greedy_indices, SelectAG(c, 3).indices);
    const double opt = static_cast<double>(AEpsOracle(c.rows(), res.optimal_indices, 1e-3L));
    EXPECT_NEAR(res.opt_value, opt, 1e-9 * opt);
  }
}

TEST(GreedyAgreementTest, TraceGreedyMatchesAEpsGreedyForSmallEpsilon) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const CandidateMatrix c = GenRandomSystem(15, 3, 80 + seed);
    const SetObjective obj(SetKind::kAEps, c, SetObjective::DefaultEpsilon(c));
    const std::vector<Index> ag = SelectAG(c, 6).indices;
    // Compare full-rank steps only: from r onward both objectives see a
    // nonsingular information matrix.
    for (size_t k = 3; k < ag.size(); ++k) {
      const std::vector<Index> prefix(ag.begin(), ag.begin() + static_cast<long>(k));
      Index best = -1;
      double best_gain = -1.0;
      for (Index i = 0; i < c.n(); ++i) {
        if (std::find(prefix.begin(), prefix.end(), i) != prefix.end()) continue;
        const double g = obj.MarginalGain(prefix, i);
        if (g > best_gain * (1 + 1e-12)) {
          best_gain = g;
          best = i;
        }
      }
      EXPECT_EQ(best, ag[k]) << "seed " << seed << " step " << k;
    }
  }
}

TEST(WriterTest, CsvHeaderAndRows) {
  const SetObjective obj(SetKind::kERaw, CandidateMatrix(CounterexampleMatrix()));
  CheckOptions opt;
  opt.max_set_size = 3;
  opt.max_witnesses = 2;
  std::ostringstream out;
  WriteReportCsv(out, CheckSubmodular(obj, opt));
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "kind,s,t,i,lhs,rhs");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_GT(rows, 0);
  EXPECT_LE(rows, 6);
}

}  // namespace
}  // namespace sensel
