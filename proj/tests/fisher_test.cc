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

#include "sensel/fisher.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "oracles.h"
#include "sensel/data.h"
#include "sensel/error.h"
#include "sensel/linalg.h"

namespace sensel {
namespace {

using oracle::Rows;

Eigen::MatrixXd RandomRows(Index p, Index r, std::uint64_t seed) {
  return GenRandomSystem(p, r, seed).rows();
}

SensorSet AllRows(const Eigen::MatrixXd& c) {
  std::vector<Index> idx(static_cast<size_t>(c.rows()));
  std::iota(idx.begin(), idx.end(), Index{0});
  return SensorSet(idx, c);
}

void ExpectCode(ErrorCode code, const std::function<void()>& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << ErrorCodeName(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

TEST(CandidateMatrixTest, RejectsEmptyAndNonFinite) {
  ExpectCode(ErrorCode::kInvalidArgument, [] { CandidateMatrix(Eigen::MatrixXd(0, 3)); });
  Eigen::MatrixXd m = Eigen::MatrixXd::Ones(2, 2);
  m(1, 0) = std::nan("");
  ExpectCode(ErrorCode::kInvalidArgument, [&] { CandidateMatrix{m}; });
}

TEST(CandidateMatrixTest, RowNorms) {
  Eigen::MatrixXd m(2, 2);
  m << 3, 4, 1, 0;
  const CandidateMatrix c(m);
  EXPECT_DOUBLE_EQ(c.row_norms_sq()(0), 25.0);
  EXPECT_DOUBLE_EQ(c.max_row_norm_sq(), 25.0);
}

TEST(BuildMeasurementTest, StacksRowsInOrder) {
  const CandidateMatrix c(RandomRows(6, 3, 1));
  const std::vector<Index> idx = {4, 0, 2};
  const SensorSet s = BuildMeasurement(c, idx);
  EXPECT_EQ(s.p(), 3);
  EXPECT_EQ(s.r(), 3);
  EXPECT_EQ(s.measurement(), Rows(c.rows(), idx));
}

TEST(BuildMeasurementTest, RejectsBadIndices) {
  const CandidateMatrix c(RandomRows(4, 2, 1));
  const std::vector<Index> dup = {1, 1};
  const std::vector<Index> out = {0, 4};
  const std::vector<Index> neg = {-1};
  ExpectCode(ErrorCode::kDuplicateSensor, [&] { BuildMeasurement(c, dup); });
  ExpectCode(ErrorCode::kIndexOutOfRange, [&] { BuildMeasurement(c, out); });
  ExpectCode(ErrorCode::kIndexOutOfRange, [&] { BuildMeasurement(c, neg); });
}

TEST(FisherInfoTest, MatchesLoopProductInBothRegimes) {
  for (Index p : {1, 2, 3, 4, 5, 7}) {
    const Eigen::MatrixXd c = RandomRows(p, 4, 10 + static_cast<std::uint64_t>(p));
    const FisherInfo f = ComputeFisherInfo(c);
    EXPECT_EQ(f.regime, RegimeFor(p, 4));
    const Eigen::MatrixXd expected = oracle::FromMat(oracle::RegimeGram(c));
    ASSERT_EQ(f.matrix.rows(), expected.rows());
    EXPECT_LE((f.matrix - expected).cwiseAbs().maxCoeff(), 1e-13 * expected.cwiseAbs().maxCoeff());
  }
}

TEST(FisherInfoTest, SquareBoundaryUsesRowGram) {
  const FisherInfo f = ComputeFisherInfo(RandomRows(3, 3, 5));
  EXPECT_EQ(f.regime, Regime::kUnder);
  EXPECT_EQ(RegimeFor(4, 3), Regime::kOver);
}

TEST(IndexTest, DeterminantMatchesCofactorExpansion) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Index p = 1 + static_cast<Index>(seed % 6);
    const Eigen::MatrixXd c = RandomRows(p, 4, seed);
    const double det = DetIndex(ComputeFisherInfo(c));
    const double expected = static_cast<double>(oracle::DetOf(c));
    EXPECT_NEAR(det, expected, 1e-12 * std::abs(expected)) << "p=" << p;
  }
}

TEST(IndexTest, TraceInverseMatchesGaussJordan) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Index p = 1 + static_cast<Index>(seed % 7);
    const Eigen::MatrixXd c = RandomRows(p, 4, 100 + seed);
    const double value = TraceInvIndex(ComputeFisherInfo(c));
    const double expected = static_cast<double>(oracle::TraceInvOf(c));
    EXPECT_NEAR(value, expected, 1e-10 * expected) << "p=" << p;
  }
}

TEST(IndexTest, MinEigenvalueMatchesCubicRoot) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Eigen::MatrixXd c = RandomRows(3 + static_cast<Index>(seed % 4), 3, 200 + seed);
    const double value = MinEigIndex(ComputeFisherInfo(c));
    const double expected = static_cast<double>(oracle::SmallestEigenvalue3(oracle::RegimeGram(c)));
    const double scale = ComputeFisherInfo(c).matrix.norm();
    EXPECT_NEAR(value, expected, 1e-12 * scale);
  }
}

TEST(IndexTest, IdentityRowsHaveUnitIndices) {
  const FisherInfo f = ComputeFisherInfo(Eigen::MatrixXd::Identity(3, 3));
  EXPECT_DOUBLE_EQ(DetIndex(f), 1.0);
  EXPECT_DOUBLE_EQ(TraceInvIndex(f), 3.0);
  EXPECT_DOUBLE_EQ(MinEigIndex(f), 1.0);
}

TEST(IndexTest, ScaleEquivariance) {
  const Eigen::MatrixXd c = RandomRows(6, 4, 7);
  const double alpha = 2.5;
  const FisherInfo f = ComputeFisherInfo(c);
  const FisherInfo g = ComputeFisherInfo(alpha * c);
  const double q = static_cast<double>(f.matrix.rows());
  EXPECT_NEAR(DetIndex(g), std::pow(alpha, 2 * q) * DetIndex(f), 1e-10 * DetIndex(g));
  EXPECT_NEAR(TraceInvIndex(g), TraceInvIndex(f) / (alpha * alpha), 1e-12 * TraceInvIndex(f));
  EXPECT_NEAR(MinEigIndex(g), alpha * alpha * MinEigIndex(f), 1e-12 * MinEigIndex(g));
}

TEST(IndexTest, PermutationInvariance) {
  for (Index p : {3, 6}) {
    const Eigen::MatrixXd c = RandomRows(p, 4, 8);
    const Eigen::MatrixXd d = c.colwise().reverse();
    const FisherInfo f = ComputeFisherInfo(c);
    const FisherInfo g = ComputeFisherInfo(d);
    EXPECT_NEAR(DetIndex(f), DetIndex(g), 1e-12 * DetIndex(f));
    EXPECT_NEAR(TraceInvIndex(f), TraceInvIndex(g), 1e-12 * TraceInvIndex(f));
    EXPECT_NEAR(MinEigIndex(f), MinEigIndex(g), 1e-12 * f.matrix.norm());
  }
}

TEST(IndexTest, ArithmeticHarmonicMeanBound) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Index p = 1 + static_cast<Index>(seed % 8);
    const FisherInfo f = ComputeFisherInfo(RandomRows(p, 4, 300 + seed));
    const double q = static_cast<double>(f.matrix.rows());
    EXPECT_GE(TraceInvIndex(f) * f.matrix.trace(), q * q * (1 - 1e-12));
    EXPECT_LE(MinEigIndex(f), std::pow(DetIndex(f), 1.0 / q) * (1 + 1e-12));
  }
}

TEST(IndexTest, SingularInformation) {
  Eigen::MatrixXd c(2, 3);
  c << 1, 2, 3, 2, 4, 6;
  const FisherInfo f = ComputeFisherInfo(c);
  EXPECT_NEAR(DetIndex(f), 0.0, 1e-12);
  EXPECT_NEAR(MinEigIndex(f), 0.0, 1e-12);
  ExpectCode(ErrorCode::kSingularInformation, [&] { TraceInvIndex(f); });
}

TEST(EstimateTest, UnderdeterminedIsMinimumNormInterpolant) {
  const Eigen::MatrixXd c = RandomRows(3, 6, 21);
  const SensorSet s = AllRows(c);
  const Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(3, -1.0, 2.0);
  const Eigen::VectorXd z = Estimate(s, y);
  EXPECT_LE((c * z - y).norm(), 1e-12 * y.norm());
  // Minimum norm means z lies in the row space: z = C^T w.
  const Eigen::VectorXd w = c.transpose().colPivHouseholderQr().solve(z);
  EXPECT_LE((c.transpose() * w - z).norm(), 1e-12 * z.norm());
}

TEST(EstimateTest, OverdeterminedSatisfiesNormalEquations) {
  const Eigen::MatrixXd c = RandomRows(9, 4, 22);
  const SensorSet s = AllRows(c);
  const Eigen::MatrixXd y = RandomRows(9, 2, 23);
  const Eigen::MatrixXd z = Estimate(s, y);
  EXPECT_LE((c.transpose() * (c * z - y)).norm(), 1e-12 * c.norm() * y.norm());
}

TEST(EstimateTest, RecoversExactLatentWhenConsistent) {
  const Eigen::MatrixXd c = RandomRows(7, 4, 24);
  const Eigen::VectorXd z = Eigen::VectorXd::LinSpaced(4, 1.0, 4.0);
  const Eigen::VectorXd est = Estimate(AllRows(c), Eigen::VectorXd(c * z));
  EXPECT_LE((est - z).norm(), 1e-12 * z.norm());
}

TEST(ErrorCovarianceTest, OverdeterminedIsScaledInverse) {
  const Eigen::MatrixXd c = RandomRows(8, 3, 30);
  const Eigen::MatrixXd cov = ErrorCovariance(AllRows(c), NoiseModel{0.5});
  const Eigen::MatrixXd expected =
      0.25 * oracle::FromMat(oracle::GaussJordanInverse(oracle::RegimeGram(c)));
  EXPECT_LE((cov - expected).cwiseAbs().maxCoeff(), 1e-12 * expected.norm());
}

TEST(ErrorCovarianceTest, UnderdeterminedAddsNullSpacePrior) {
  const Eigen::MatrixXd c = RandomRows(2, 4, 31);
  const double sigma = 0.3;
  const Eigen::MatrixXd cov = ErrorCovariance(AllRows(c), NoiseModel{sigma});
  // pinv = C^T (C C^T)^{-1}; error = (I - pinv C) z - pinv e.
  const Eigen::MatrixXd g_inv = oracle::FromMat(oracle::GaussJordanInverse(oracle::RegimeGram(c)));
  const Eigen::MatrixXd pinv = c.transpose() * g_inv;
  const Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(4, 4) - pinv * c;
  const Eigen::MatrixXd expected = proj * proj.transpose() + sigma * sigma * pinv * pinv.transpose();
  EXPECT_LE((cov - expected).cwiseAbs().maxCoeff(), 1e-12 * expected.norm());
}

TEST(ErrorCovarianceTest, CustomPrior) {
  const Eigen::MatrixXd c = RandomRows(2, 3, 32);
  const Eigen::MatrixXd prior = Eigen::Vector3d(1.0, 4.0, 9.0).asDiagonal();
  const Eigen::MatrixXd cov = ErrorCovariance(AllRows(c), NoiseModel{0.0}, prior);
  const Eigen::MatrixXd pinv = c.completeOrthogonalDecomposition().pseudoInverse();
  const Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(3, 3) - pinv * c;
  EXPECT_LE((cov - proj * prior * proj.transpose()).norm(), 1e-12 * prior.norm());
}

TEST(ObservableTest, BasisIsOrthonormalAndSpansRows) {
  for (Index p : {2, 4, 7}) {
    const SensorSet s = AllRows(RandomRows(p, 4, 40 + static_cast<std::uint64_t>(p)));
    const Eigen::MatrixXd b = ObservableBasis(s);
    ASSERT_EQ(b.rows(), 4);
    ASSERT_EQ(b.cols(), std::min<Index>(p, 4));
    EXPECT_LE((b.transpose() * b - Eigen::MatrixXd::Identity(b.cols(), b.cols())).norm(), 1e-12);
    // Every row of C lies in the span of the basis.
    const Eigen::MatrixXd c = s.measurement();
    EXPECT_LE((c - c * b * b.transpose()).norm(), 1e-12 * c.norm());
  }
}

TEST(ObservableTest, TraceEqualsScaledTraceInverse) {
  for (Index p : {2, 3, 4, 6, 9}) {
    const SensorSet s = AllRows(RandomRows(p, 4, 50 + static_cast<std::uint64_t>(p)));
    const double sigma = 0.7;
    const Eigen::MatrixXd cov = ObservableErrorCovariance(s, NoiseModel{sigma});
    const double expected = sigma * sigma * TraceInvIndex(ComputeFisherInfo(s));
    EXPECT_NEAR(cov.trace(), expected, 1e-10 * expected) << "p=" << p;
    EXPECT_LE((cov - cov.transpose()).norm(), 1e-12 * cov.norm());
  }
}

TEST(ObservableTest, UnderdeterminedIsInverseSquaredSingularValues) {
  const SensorSet s = AllRows(RandomRows(3, 5, 60));
  const Eigen::MatrixXd cov = ObservableErrorCovariance(s, NoiseModel{1.0});
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(s.measurement()).singularValues();
  for (Index i = 0; i < 3; ++i) {
    for (Index j = 0; j < 3; ++j) {
      const double expected = i == j ? 1.0 / (sv(i) * sv(i)) : 0.0;
      EXPECT_NEAR(cov(i, j), expected, 1e-10 * cov.norm());
    }
  }
}

TEST(ObservableTest, RankDeficientThrows) {
  Eigen::MatrixXd c(3, 4);
  c << 1, 0, 0, 0, 0, 1, 0, 0, 1, 1, 0, 0;
  ExpectCode(ErrorCode::kRankDeficient, [&] { ObservableErrorCovariance(AllRows(c), NoiseModel{1}); });
}

TEST(ReconstructionErrorTest, RelativeFrobenius) {
  Eigen::MatrixXd truth(2, 1), est(2, 1);
  truth << 3, 4;
  est << 3, 5;
  EXPECT_DOUBLE_EQ(ReconstructionError(truth, est), 0.2);
  ExpectCode(ErrorCode::kZeroReference,
             [] { ReconstructionError(Eigen::MatrixXd::Zero(2, 1), Eigen::MatrixXd::Ones(2, 1)); });
}

TEST(LinalgTest, SolveSpdAgreesWithGaussJordan) {
  const Eigen::MatrixXd c = RandomRows(9, 5, 70);
  const Eigen::MatrixXd a = c.transpose() * c;
  const Eigen::MatrixXd b = RandomRows(5, 2, 71);
  const Eigen::MatrixXd x = SolveSpd(a, b);
  const Eigen::MatrixXd expected = oracle::FromMat(oracle::GaussJordanInverse(oracle::ToMat(a))) * b;
  EXPECT_LE((x - expected).norm(), 1e-10 * expected.norm());
}

TEST(LinalgTest, SingularityThresholdIsRelative) {
  Eigen::VectorXd ev(2);
  ev << 1e-13, 1.0;
  EXPECT_TRUE(IsNumericallySingular(ev));
  ev << 1e-11, 1.0;
  EXPECT_FALSE(IsNumericallySingular(ev));
  ev << 1e-13, 1e-2;
  EXPECT_FALSE(IsNumericallySingular(ev));
}

}  // namespace
}  // namespace sensel
