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

#include "sensel/selectors.h"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "sensel/error.h"
#include "sensel/linalg.h"
#include "sensel/rng.h"

namespace sensel {

namespace {

// Relative floor on the projection residual ||u||^2 - u P_C u^T below which
// an AG candidate is treated as lying in the span of the selected rows.
constexpr double kResidualFloor = 1e-10;

// Debug-build bound on ||M M^{-1} - I||_max for the cached inverses.
constexpr double kInverseDrift = 1e-8;

void CheckCount(const CandidateMatrix& cand, Index p) {
  if (p < 1) throw Error(ErrorCode::kInvalidArgument, "sensor count must be at least 1");
  if (p > cand.n()) {
    throw Error(ErrorCode::kTooManySensors, "requested " + std::to_string(p) + " sensors from " +
                                                std::to_string(cand.n()) + " candidates");
  }
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

Eigen::MatrixXd StackRows(const CandidateMatrix& cand, const std::vector<Index>& indices) {
  Eigen::MatrixXd c(static_cast<Index>(indices.size()), cand.r());
  for (size_t k = 0; k < indices.size(); ++k) c.row(static_cast<Index>(k)) = cand.row(indices[k]);
  return c;
}

// The first step of every greedy method: the largest row.
Index LargestRow(const CandidateMatrix& cand) {
  ArgBest best(ArgBest::Sense::kMax);
  for (Index i = 0; i < cand.n(); ++i) best.Offer(i, cand.row_norms_sq()(i));
  return best.index();
}

// Cached (C^T C)^{-1} for the overdetermined steps, advanced by
// Sherman-Morrison and rebuilt from scratch every r additions.
class OverdeterminedInverse {
 public:
  explicit OverdeterminedInverse(const Eigen::MatrixXd& c)
      : gram_(Symmetrize(c.transpose() * c)), inverse_(InverseSpd(gram_)) {}

  const Eigen::MatrixXd& inverse() const { return inverse_; }
  const Eigen::MatrixXd& gram() const { return gram_; }

  void Add(const Eigen::RowVectorXd& u) {
    const Eigen::VectorXd g = inverse_ * u.transpose();
    const double denom = 1.0 + u.dot(g);
    gram_.noalias() += u.transpose() * u;
    inverse_.noalias() -= (g * g.transpose()) / denom;
    if (++since_refresh_ >= gram_.rows() || Drifted()) Refresh();
  }

 private:
  bool Drifted() const {
#ifndef NDEBUG
    const Eigen::MatrixXd residual =
        gram_ * inverse_ - Eigen::MatrixXd::Identity(gram_.rows(), gram_.cols());
    return residual.cwiseAbs().maxCoeff() > kInverseDrift;
#else
    return false;
#endif
  }

  void Refresh() {
    gram_ = Symmetrize(gram_);
    inverse_ = InverseSpd(gram_);
    since_refresh_ = 0;
  }

  Eigen::MatrixXd gram_;
  Eigen::MatrixXd inverse_;
  Index since_refresh_ = 0;
};

// Cached (C C^T)^{-1} for the underdetermined steps, grown by bordering:
// with w = (C C^T)^{-1} C u^T and s = u u^T - u C^T w,
//   [[G, C u^T], [u C^T, u u^T]]^{-1} = [[G^{-1} + w w^T / s, -w / s], [-w^T / s, 1 / s]].
class UnderdeterminedInverse {
 public:
  explicit UnderdeterminedInverse(const Eigen::RowVectorXd& first)
      : c_(first), inverse_(Eigen::MatrixXd::Constant(1, 1, 1.0 / first.squaredNorm())) {}

  const Eigen::MatrixXd& c() const { return c_; }
  const Eigen::MatrixXd& inverse() const { return inverse_; }

  void Add(const Eigen::RowVectorXd& u, const Eigen::VectorXd& w, double schur) {
    const Index k = c_.rows();
    c_.conservativeResize(k + 1, Eigen::NoChange);
    c_.row(k) = u;
    Eigen::MatrixXd next(k + 1, k + 1);
    next.topLeftCorner(k, k) = inverse_ + (w * w.transpose()) / schur;
    next.topRightCorner(k, 1) = -w / schur;
    next.bottomLeftCorner(1, k) = -w.transpose() / schur;
    next(k, k) = 1.0 / schur;
    inverse_ = std::move(next);
    if (Drifted()) inverse_ = InverseSpd(Symmetrize(c_ * c_.transpose()));
  }

 private:
  bool Drifted() const {
#ifndef NDEBUG
    const Eigen::MatrixXd residual = (c_ * c_.transpose()) * inverse_ -
                                     Eigen::MatrixXd::Identity(c_.rows(), c_.rows());
    return residual.cwiseAbs().maxCoeff() > kInverseDrift;
#else
    return false;
#endif
  }

  Eigen::MatrixXd c_;
  Eigen::MatrixXd inverse_;
};

double RegimeDet(const Eigen::MatrixXd& c) { return DetIndex(ComputeFisherInfo(c)); }

}  // namespace

std::string_view MethodName(Method method) {
  switch (method) {
    case Method::kDG: return "DG";
    case Method::kAG: return "AG";
    case Method::kEG: return "EG";
    case Method::kRandom: return "RANDOM";
    case Method::kBrute: return "BRUTE";
    case Method::kDC: return "DC";
  }
  return "?";
}

std::optional<Method> ParseMethod(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "dg") return Method::kDG;
  if (lower == "ag") return Method::kAG;
  if (lower == "eg") return Method::kEG;
  if (lower == "random") return Method::kRandom;
  if (lower == "brute") return Method::kBrute;
  if (lower == "dc") return Method::kDC;
  return std::nullopt;
}

SelectionResult SelectDG(const CandidateMatrix& cand, Index p) {
  CheckCount(cand, p);
  const Stopwatch clock;
  const Index n = cand.n();
  const Index r = cand.r();
  SelectionResult out{Method::kDG, {}, {}, 0.0};
  std::vector<bool> taken(static_cast<size_t>(n), false);

  // Column-pivoted QR of U^T, carried out on the rows of U.
  Eigen::MatrixXd residual = cand.rows();
  double det = 1.0;
  for (Index k = 0; k < std::min(p, r); ++k) {
    const Eigen::VectorXd norms = residual.rowwise().squaredNorm();
    ArgBest best(ArgBest::Sense::kMax);
    for (Index i = 0; i < n; ++i) {
      if (!taken[static_cast<size_t>(i)]) best.Offer(i, norms(i));
    }
    const Index pick = best.index();
    taken[static_cast<size_t>(pick)] = true;
    out.indices.push_back(pick);
    det *= norms(pick);
    out.per_step_objective.push_back(det);
    if (norms(pick) > 0.0) {
      const Eigen::VectorXd q = residual.row(pick).transpose() / std::sqrt(norms(pick));
      residual -= (residual * q) * q.transpose();
    }
  }
  if (p <= r) {
    out.wall_time_s = clock.Seconds();
    return out;
  }

  // det(C^T C + u^T u) = det(C^T C) (1 + u (C^T C)^{-1} u^T).
  OverdeterminedInverse cache(StackRows(cand, out.indices));
  det = DetIndex(FisherInfo{Regime::kOver, cache.gram()});
  for (Index k = r; k < p; ++k) {
    const Eigen::VectorXd ratio =
        ((cand.rows() * cache.inverse()).cwiseProduct(cand.rows())).rowwise().sum().array() + 1.0;
    ArgBest best(ArgBest::Sense::kMax);
    for (Index i = 0; i < n; ++i) {
      if (!taken[static_cast<size_t>(i)]) best.Offer(i, ratio(i));
    }
    const Index pick = best.index();
    taken[static_cast<size_t>(pick)] = true;
    out.indices.push_back(pick);
    det *= ratio(pick);
    out.per_step_objective.push_back(det);
    cache.Add(cand.row(pick));
  }
  out.wall_time_s = clock.Seconds();
  return out;
}

SelectionResult SelectAG(const CandidateMatrix& cand, Index p) {
  CheckCount(cand, p);
  const Stopwatch clock;
  const Index n = cand.n();
  const Index r = cand.r();
  const Eigen::MatrixXd& u = cand.rows();
  const Eigen::VectorXd& norms = cand.row_norms_sq();
  SelectionResult out{Method::kAG, {}, {}, 0.0};
  std::vector<bool> taken(static_cast<size_t>(n), false);

  // k = 1: tr[(u u^T)^{-1}] = 1 / ||u||^2.
  const Index first = LargestRow(cand);
  if (!(norms(first) > 0.0)) {
    throw Error(ErrorCode::kNoAdmissibleCandidate, "every candidate row is zero");
  }
  taken[static_cast<size_t>(first)] = true;
  out.indices.push_back(first);
  double trace = 1.0 / norms(first);
  out.per_step_objective.push_back(trace);

  // p <= r: the trace grows by (||G^{-1} C u^T||^2 + 1) / (u (I - P_C) u^T).
  UnderdeterminedInverse under(u.row(first));
  for (Index k = 1; k < std::min(p, r); ++k) {
    const Eigen::MatrixXd cross = u * under.c().transpose();  // n x k, rows u C^T
    const Eigen::MatrixXd w = cross * under.inverse();       // rows (G^{-1} C u^T)^T
    const Eigen::VectorXd numer = w.rowwise().squaredNorm().array() + 1.0;
    const Eigen::VectorXd denom = norms - cross.cwiseProduct(w).rowwise().sum();
    ArgBest best(ArgBest::Sense::kMin);
    for (Index i = 0; i < n; ++i) {
      if (taken[static_cast<size_t>(i)]) continue;
      if (!(denom(i) > kResidualFloor * norms(i))) continue;
      best.Offer(i, numer(i) / denom(i));
    }
    if (!best.has_value()) {
      throw Error(ErrorCode::kNoAdmissibleCandidate,
                  "no candidate adds a new direction at step " + std::to_string(k + 1));
    }
    const Index pick = best.index();
    taken[static_cast<size_t>(pick)] = true;
    out.indices.push_back(pick);
    trace += best.value();
    out.per_step_objective.push_back(trace);
    under.Add(u.row(pick), w.row(pick).transpose(), denom(pick));
  }
  if (p <= r) {
    out.wall_time_s = clock.Seconds();
    return out;
  }

  // p > r: the trace drops by ||G^{-1} u^T||^2 / (1 + u G^{-1} u^T).
  OverdeterminedInverse over(under.c());
  trace = over.inverse().trace();
  for (Index k = r; k < p; ++k) {
    const Eigen::MatrixXd g = u * over.inverse();
    const Eigen::VectorXd numer = g.rowwise().squaredNorm();
    const Eigen::VectorXd denom = g.cwiseProduct(u).rowwise().sum().array() + 1.0;
    ArgBest best(ArgBest::Sense::kMin);
    for (Index i = 0; i < n; ++i) {
      if (!taken[static_cast<size_t>(i)]) best.Offer(i, -numer(i) / denom(i));
    }
    const Index pick = best.index();
    taken[static_cast<size_t>(pick)] = true;
    out.indices.push_back(pick);
    trace += best.value();
    out.per_step_objective.push_back(trace);
    over.Add(u.row(pick));
  }
  out.wall_time_s = clock.Seconds();
  return out;
}

SelectionResult SelectEG(const CandidateMatrix& cand, Index p) {
  CheckCount(cand, p);
  const Stopwatch clock;
  const Index n = cand.n();
  const Index r = cand.r();
  const Eigen::MatrixXd& u = cand.rows();
  const Eigen::VectorXd& norms = cand.row_norms_sq();
  SelectionResult out{Method::kEG, {}, {}, 0.0};
  std::vector<bool> taken(static_cast<size_t>(n), false);

  const Index first = LargestRow(cand);
  taken[static_cast<size_t>(first)] = true;
  out.indices.push_back(first);
  out.per_step_objective.push_back(norms(first));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  auto lambda_min = [&solver](const Eigen::MatrixXd& m) {
    solver.compute(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorCode::kEigenFailure, "symmetric eigensolver did not converge");
    }
    return solver.eigenvalues()(0);
  };

  // p <= r: lambda_min of the bordered matrix [[C C^T, C u^T], [u C^T, u u^T]].
  Eigen::MatrixXd c = u.row(first);
  for (Index k = 1; k < std::min(p, r); ++k) {
    const Eigen::MatrixXd cross = u * c.transpose();
    Eigen::MatrixXd bordered(k + 1, k + 1);
    bordered.topLeftCorner(k, k) = Symmetrize(c * c.transpose());
    ArgBest best(ArgBest::Sense::kMax);
    for (Index i = 0; i < n; ++i) {
      if (taken[static_cast<size_t>(i)]) continue;
      bordered.topRightCorner(k, 1) = cross.row(i).transpose();
      bordered.bottomLeftCorner(1, k) = cross.row(i);
      bordered(k, k) = norms(i);
      best.Offer(i, lambda_min(bordered));
    }
    const Index pick = best.index();
    taken[static_cast<size_t>(pick)] = true;
    out.indices.push_back(pick);
    out.per_step_objective.push_back(best.value());
    c.conservativeResize(k + 1, Eigen::NoChange);
    c.row(k) = u.row(pick);
  }

  // p > r: lambda_min(C^T C + u^T u).
  if (p > r) {
    Eigen::MatrixXd gram = Symmetrize(c.transpose() * c);
    Eigen::MatrixXd trial(r, r);
    for (Index k = r; k < p; ++k) {
      ArgBest best(ArgBest::Sense::kMax);
      for (Index i = 0; i < n; ++i) {
        if (taken[static_cast<size_t>(i)]) continue;
        trial.noalias() = gram + u.row(i).transpose() * u.row(i);
        best.Offer(i, lambda_min(trial));
      }
      const Index pick = best.index();
      taken[static_cast<size_t>(pick)] = true;
      out.indices.push_back(pick);
      out.per_step_objective.push_back(best.value());
      gram.noalias() += u.row(pick).transpose() * u.row(pick);
    }
  }
  out.wall_time_s = clock.Seconds();
  return out;
}

SelectionResult SelectRandom(const CandidateMatrix& cand, Index p, std::uint64_t seed) {
  CheckCount(cand, p);
  const Stopwatch clock;
  Rng rng(seed);
  std::vector<Index> pool(static_cast<size_t>(cand.n()));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index k = 0; k < p; ++k) {
    const auto remaining = static_cast<std::uint64_t>(cand.n() - k);
    const auto j = static_cast<size_t>(k) + static_cast<size_t>(rng.Below(remaining));
    std::swap(pool[static_cast<size_t>(k)], pool[j]);
  }
  SelectionResult out{Method::kRandom, std::vector<Index>(pool.begin(), pool.begin() + p), {}, 0.0};
  out.wall_time_s = clock.Seconds();
  for (Index k = 1; k <= p; ++k) {
    out.per_step_objective.push_back(
        RegimeDet(StackRows(cand, std::vector<Index>(out.indices.begin(), out.indices.begin() + k))));
  }
  return out;
}

std::optional<SubsetOptimum> ExhaustiveSearch(
    Index n, Index p, ArgBest::Sense sense,
    const std::function<std::optional<double>(std::span<const Index>)>& objective) {
  if (BinomialCapped(n, p, kEnumerationLimit) > kEnumerationLimit) {
    throw Error(ErrorCode::kInstanceTooLarge, "C(" + std::to_string(n) + ", " +
                                                  std::to_string(p) + ") exceeds the enumeration limit");
  }
  ArgBest best(sense);
  std::vector<Index> best_set;
  Index ordinal = 0;
  ForEachCombination(n, p, [&](std::span<const Index> subset) {
    if (const std::optional<double> value = objective(subset)) {
      best.Offer(ordinal, *value);
      if (best.index() == ordinal) best_set.assign(subset.begin(), subset.end());
    }
    ++ordinal;
    return true;
  });
  if (!best.has_value()) return std::nullopt;
  return SubsetOptimum{std::move(best_set), best.value()};
}

namespace {

std::optional<double> CriterionValue(const Eigen::MatrixXd& c, Criterion criterion) {
  const FisherInfo f = ComputeFisherInfo(c);
  switch (criterion) {
    case Criterion::kD: return DetIndex(f);
    case Criterion::kE: return MinEigIndex(f);
    case Criterion::kA:
      try {
        return TraceInvIndex(f);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kSingularInformation) return std::nullopt;
        throw;
      }
  }
  return std::nullopt;
}

}  // namespace

SelectionResult SelectBruteForce(const CandidateMatrix& cand, Index p, Criterion criterion) {
  CheckCount(cand, p);
  const Stopwatch clock;
  const ArgBest::Sense sense =
      criterion == Criterion::kA ? ArgBest::Sense::kMin : ArgBest::Sense::kMax;
  Eigen::MatrixXd c(p, cand.r());
  const auto optimum = ExhaustiveSearch(cand.n(), p, sense, [&](std::span<const Index> subset) {
    for (Index k = 0; k < p; ++k) c.row(k) = cand.row(subset[static_cast<size_t>(k)]);
    return CriterionValue(c, criterion);
  });
  if (!optimum) {
    throw Error(ErrorCode::kNoAdmissibleCandidate, "every subset has a singular information matrix");
  }
  SelectionResult out{Method::kBrute, optimum->indices, {}, clock.Seconds()};
  for (Index k = 1; k <= p; ++k) {
    const auto value = CriterionValue(
        StackRows(cand, std::vector<Index>(out.indices.begin(), out.indices.begin() + k)), criterion);
    out.per_step_objective.push_back(value.value_or(std::numeric_limits<double>::quiet_NaN()));
  }
  return out;
}

SelectionResult Select(Method method, const CandidateMatrix& cand, Index p, std::uint64_t seed) {
  switch (method) {
    case Method::kDG: return SelectDG(cand, p);
    case Method::kAG: return SelectAG(cand, p);
    case Method::kEG: return SelectEG(cand, p);
    case Method::kRandom: return SelectRandom(cand, p, seed);
    case Method::kBrute: return SelectBruteForce(cand, p, Criterion::kD);
    case Method::kDC:
      throw Error(ErrorCode::kNotImplemented, "convex relaxation (DC) is not available");
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown method");
}

}  // namespace sensel
