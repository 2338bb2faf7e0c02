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

#ifndef SENSEL_LINALG_H_
#define SENSEL_LINALG_H_

// Small dense helpers shared by the Fisher-information and selector code.
// Gram matrices here are at most a few tens on a side.

#include <Eigen/Dense>

namespace sensel {

// A Gram matrix counts as singular when lambda_min <= kSingularRatio * lambda_max.
inline constexpr double kSingularRatio = 1e-12;

inline Eigen::MatrixXd Symmetrize(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

// Ascending eigenvalues of the symmetrized input. Throws EigenFailure.
Eigen::VectorXd SymmetricEigenvalues(const Eigen::MatrixXd& m);

// Smallest eigenvalue; values within 1e-12 * ||m|| below zero are clamped to 0.
double SmallestEigenvalue(const Eigen::MatrixXd& m);

bool IsNumericallySingular(const Eigen::VectorXd& ascending_eigenvalues);

// Solves a * x = b for symmetric positive definite a. Cholesky first, LU
// when the Cholesky factorization breaks down. Throws SingularInformation
// when a fails the singularity test above.
Eigen::MatrixXd SolveSpd(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

// a^{-1} through SolveSpd, for the cached factors of the greedy selectors.
Eigen::MatrixXd InverseSpd(const Eigen::MatrixXd& a);

}  // namespace sensel

#endif  // SENSEL_LINALG_H_
