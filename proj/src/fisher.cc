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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sensel/error.h"
#include "sensel/linalg.h"

namespace sensel {

CandidateMatrix::CandidateMatrix(Eigen::MatrixXd rows) : rows_(std::move(rows)) {
  if (rows_.rows() < 1 || rows_.cols() < 1) {
    throw Error(ErrorCode::kInvalidArgument, "candidate matrix must be at least 1 x 1");
  }
  if (!rows_.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "candidate matrix has non-finite entries");
  }
  row_norms_sq_ = rows_.rowwise().squaredNorm();
}

SensorSet BuildMeasurement(const CandidateMatrix& cand, std::span<const Index> indices) {
  std::vector<bool> seen(static_cast<size_t>(cand.n()), false);
  Eigen::MatrixXd c(static_cast<Index>(indices.size()), cand.r());
  for (size_t k = 0; k < indices.size(); ++k) {
    const Index i = indices[k];
    if (i < 0 || i >= cand.n()) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "sensor " + std::to_string(i) + " not in [0, " + std::to_string(cand.n()) + ")");
    }
    if (seen[static_cast<size_t>(i)]) {
      throw Error(ErrorCode::kDuplicateSensor, "sensor " + std::to_string(i) + " listed twice");
    }
    seen[static_cast<size_t>(i)] = true;
    c.row(static_cast<Index>(k)) = cand.row(i);
  }
  return SensorSet(std::vector<Index>(indices.begin(), indices.end()), std::move(c));
}

FisherInfo ComputeFisherInfo(const Eigen::MatrixXd& c) {
  const Regime regime = RegimeFor(c.rows(), c.cols());
  Eigen::MatrixXd gram = regime == Regime::kUnder ? Eigen::MatrixXd(c * c.transpose())
                                                  : Eigen::MatrixXd(c.transpose() * c);
  return FisherInfo{regime, Symmetrize(gram)};
}

double DetIndex(const FisherInfo& f) {
  if (f.matrix.rows() == 0) return 1.0;
  // Gram matrices are PSD; a negative value is LU roundoff on a singular one.
  return std::max(0.0, f.matrix.determinant());
}

double TraceInvIndex(const FisherInfo& f) {
  return SolveSpd(f.matrix, Eigen::MatrixXd::Identity(f.matrix.rows(), f.matrix.cols()))
      .trace();
}

double MinEigIndex(const FisherInfo& f) { return SmallestEigenvalue(f.matrix); }

Eigen::MatrixXd Estimate(const SensorSet& s, const Eigen::MatrixXd& y) {
  const Eigen::MatrixXd& c = s.measurement();
  if (y.rows() != c.rows()) {
    throw Error(ErrorCode::kInvalidArgument, "observation rows do not match sensor count");
  }
  const FisherInfo f = ComputeFisherInfo(c);
  if (f.regime == Regime::kUnder) return c.transpose() * SolveSpd(f.matrix, y);
  return SolveSpd(f.matrix, c.transpose() * y);
}

Eigen::VectorXd Estimate(const SensorSet& s, const Eigen::VectorXd& y) {
  return Estimate(s, Eigen::MatrixXd(y)).col(0);
}

Eigen::MatrixXd ErrorCovariance(const SensorSet& s, NoiseModel noise,
                                const std::optional<Eigen::MatrixXd>& prior_zz) {
  const Eigen::MatrixXd& c = s.measurement();
  const Index r = c.cols();
  const double var = noise.sigma * noise.sigma;
  const FisherInfo f = ComputeFisherInfo(c);
  if (f.regime == Regime::kOver) {
    return Symmetrize(var * SolveSpd(f.matrix, Eigen::MatrixXd::Identity(r, r)));
  }
  const Eigen::MatrixXd prior = prior_zz.value_or(Eigen::MatrixXd::Identity(r, r));
  if (prior.rows() != r || prior.cols() != r) {
    throw Error(ErrorCode::kInvalidArgument, "prior covariance must be r x r");
  }
  // x = (C C^T)^{-1} C, so P_C = C^T x and C^T (C C^T)^{-2} C = x^T x.
  const Eigen::MatrixXd x = SolveSpd(f.matrix, c);
  const Eigen::MatrixXd residual = Eigen::MatrixXd::Identity(r, r) - c.transpose() * x;
  return Symmetrize(residual * prior * residual.transpose() + var * x.transpose() * x);
}

namespace {

struct OrientedSvd {
  Eigen::MatrixXd u;  // p x p
  Eigen::VectorXd singular;
  Eigen::MatrixXd v;  // r x r
};

// Full SVD with the first nonzero entry of every left singular vector made
// nonnegative (right vectors flipped along with them).
OrientedSvd FullSvd(const Eigen::MatrixXd& c) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
  OrientedSvd out{svd.matrixU(), svd.singularValues(), svd.matrixV()};
  const Index k = std::min(c.rows(), c.cols());
  for (Index j = 0; j < out.u.cols(); ++j) {
    for (Index i = 0; i < out.u.rows(); ++i) {
      const double value = out.u(i, j);
      if (std::abs(value) > 1e-14) {
        if (value < 0.0) {
          out.u.col(j) *= -1.0;
          if (j < k) out.v.col(j) *= -1.0;
        }
        break;
      }
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXd ObservableBasis(const SensorSet& s) {
  const Eigen::MatrixXd& c = s.measurement();
  const OrientedSvd svd = FullSvd(c);
  return svd.v.leftCols(std::min(c.rows(), c.cols()));
}

Eigen::MatrixXd ObservableErrorCovariance(const SensorSet& s, NoiseModel noise) {
  const Eigen::MatrixXd& c = s.measurement();
  const OrientedSvd svd = FullSvd(c);
  const Index k = std::min(c.rows(), c.cols());
  const double tol = static_cast<double>(std::max(c.rows(), c.cols())) *
                     std::numeric_limits<double>::epsilon() * svd.singular(0);
  if (k == 0 || !(svd.singular(k - 1) > tol)) {
    throw Error(ErrorCode::kRankDeficient, "measurement matrix does not have full rank");
  }
  const FisherInfo f = ComputeFisherInfo(c);
  const double var = noise.sigma * noise.sigma;
  const Eigen::MatrixXd& basis = f.regime == Regime::kUnder ? svd.u : svd.v;
  return Symmetrize(var * basis.transpose() * SolveSpd(f.matrix, basis));
}

double ReconstructionError(const Eigen::MatrixXd& z_true, const Eigen::MatrixXd& z_est) {
  if (z_true.rows() != z_est.rows() || z_true.cols() != z_est.cols()) {
    throw Error(ErrorCode::kInvalidArgument, "reconstruction shapes differ");
  }
  const double ref = z_true.norm();
  if (!(ref > 0.0)) throw Error(ErrorCode::kZeroReference, "true state has zero norm");
  return (z_est - z_true).norm() / ref;
}

}  // namespace sensel
