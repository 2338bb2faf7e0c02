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

#ifndef SENSEL_FISHER_H_
#define SENSEL_FISHER_H_

// Linear observation model y = C z, where C stacks selected rows of the
// n x r sensor-candidate matrix U. Everything here is a pure function of its
// inputs.
//
// The information matrix switches with the number of sensors p:
//   p <= r  (underdetermined):  C C^T   (p x p)
//   p >  r  (overdetermined):   C^T C   (r x r)
//
// Sensor indices are zero-based throughout the library.

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace sensel {

using Index = Eigen::Index;

class CandidateMatrix {
 public:
  // Throws InvalidArgument on an empty matrix or a non-finite entry.
  explicit CandidateMatrix(Eigen::MatrixXd rows);

  Index n() const { return rows_.rows(); }
  Index r() const { return rows_.cols(); }
  const Eigen::MatrixXd& rows() const { return rows_; }
  auto row(Index i) const { return rows_.row(i); }

  // Squared Euclidean norm of every row (length n).
  const Eigen::VectorXd& row_norms_sq() const { return row_norms_sq_; }
  double max_row_norm_sq() const { return row_norms_sq_.maxCoeff(); }

 private:
  Eigen::MatrixXd rows_;
  Eigen::VectorXd row_norms_sq_;
};

class SensorSet {
 public:
  SensorSet(std::vector<Index> indices, Eigen::MatrixXd measurement)
      : indices_(std::move(indices)), measurement_(std::move(measurement)) {}

  Index p() const { return static_cast<Index>(indices_.size()); }
  Index r() const { return measurement_.cols(); }
  const std::vector<Index>& indices() const { return indices_; }
  // p x r, row k is candidate row indices()[k].
  const Eigen::MatrixXd& measurement() const { return measurement_; }

 private:
  std::vector<Index> indices_;
  Eigen::MatrixXd measurement_;
};

enum class Regime { kUnder, kOver };

inline Regime RegimeFor(Index p, Index r) { return p <= r ? Regime::kUnder : Regime::kOver; }

struct FisherInfo {
  Regime regime;
  Eigen::MatrixXd matrix;  // symmetric PSD
};

struct NoiseModel {
  double sigma = 0.0;
};

// Stacks the rows named by `indices` in the given order.
// Throws DuplicateSensor / IndexOutOfRange.
SensorSet BuildMeasurement(const CandidateMatrix& cand, std::span<const Index> indices);

FisherInfo ComputeFisherInfo(const Eigen::MatrixXd& measurement);
inline FisherInfo ComputeFisherInfo(const SensorSet& s) {
  return ComputeFisherInfo(s.measurement());
}

// D-optimality index: det of the regime matrix (0 for singular ones).
double DetIndex(const FisherInfo& f);
// A-optimality index: tr of the inverse. Throws SingularInformation.
double TraceInvIndex(const FisherInfo& f);
// E-optimality index: smallest eigenvalue. Throws EigenFailure.
double MinEigIndex(const FisherInfo& f);

// Pseudo-inverse estimate z = C^+ y, column by column. y is p x m, result r x m.
// Minimum-norm solution for p <= r, least squares for p > r.
Eigen::MatrixXd Estimate(const SensorSet& s, const Eigen::MatrixXd& y);
Eigen::VectorXd Estimate(const SensorSet& s, const Eigen::VectorXd& y);

// Covariance of z - z_hat (r x r). `prior_zz` is E[z z^T] and only enters
// the underdetermined branch; it defaults to the identity.
Eigen::MatrixXd ErrorCovariance(const SensorSet& s, NoiseModel noise,
                                const std::optional<Eigen::MatrixXd>& prior_zz = std::nullopt);

// Orthonormal basis (r x min(p, r)) of the row space of C: the leading right
// singular vectors, ordered by descending singular value. The observable
// coordinates are zeta = basis^T z.
Eigen::MatrixXd ObservableBasis(const SensorSet& s);

// Covariance of zeta - zeta_hat in the observable coordinates:
//   p <= r:  sigma^2 U_C^T (C C^T)^{-1} U_C    (p x p)
//   p >  r:  sigma^2 V_C^T (C^T C)^{-1} V_C    (r x r)
// Throws RankDeficient or SingularInformation.
Eigen::MatrixXd ObservableErrorCovariance(const SensorSet& s, NoiseModel noise);

// ||z_est - z_true||_F / ||z_true||_F. Throws ZeroReference.
double ReconstructionError(const Eigen::MatrixXd& z_true, const Eigen::MatrixXd& z_est);

}  // namespace sensel

#endif  // SENSEL_FISHER_H_
