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

#include "sensel/linalg.h"

#include <algorithm>
#include <cmath>

#include "sensel/error.h"

namespace sensel {

Eigen::VectorXd SymmetricEigenvalues(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::kInvalidArgument, "eigenvalues of a non-square matrix");
  }
  if (m.rows() == 0) return Eigen::VectorXd();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(Symmetrize(m),
                                                        Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kEigenFailure, "symmetric eigensolver did not converge");
  }
  return solver.eigenvalues();
}

double SmallestEigenvalue(const Eigen::MatrixXd& m) {
  const Eigen::VectorXd eig = SymmetricEigenvalues(m);
  if (eig.size() == 0) return 0.0;
  const double lambda = eig(0);
  const double scale = m.norm();
  if (lambda < 0.0 && lambda >= -1e-12 * scale) return 0.0;
  return lambda;
}

bool IsNumericallySingular(const Eigen::VectorXd& eig) {
  if (eig.size() == 0) return true;
  const double top = eig(eig.size() - 1);
  return !(top > 0.0) || eig(0) <= kSingularRatio * top;
}

Eigen::MatrixXd SolveSpd(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (IsNumericallySingular(SymmetricEigenvalues(a))) {
    throw Error(ErrorCode::kSingularInformation,
                "Gram matrix of order " + std::to_string(a.rows()) +
                    " is singular to working precision");
  }
  const Eigen::MatrixXd sym = Symmetrize(a);
  Eigen::LLT<Eigen::MatrixXd> llt(sym);
  if (llt.info() == Eigen::Success) return llt.solve(b);
  return sym.partialPivLu().solve(b);
}

Eigen::MatrixXd InverseSpd(const Eigen::MatrixXd& a) {
  return SolveSpd(a, Eigen::MatrixXd::Identity(a.rows(), a.cols()));
}

}  // namespace sensel
