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

#ifndef SENSEL_DATA_H_
#define SENSEL_DATA_H_

// Snapshot ingestion, POD truncation, K-fold partitioning and seeded
// generators.
//
// CSV layout:
//   line 1:  n,m[,width,height]
//   then m lines of n comma-separated decimals; line j is snapshot j.
//
// RAW_F64 layout (little-endian):
//   bytes  0-3   magic "SNAP"
//   bytes  4-7   u32 version = 1
//   bytes  8-15  u64 n
//   bytes 16-23  u64 m
//   bytes 24-27  u32 flags, bit 0 = mask present
//   bytes 28-31  padding
//   then n mask bytes when flagged (nonzero = valid location),
//   then n*m float64 values in column-major order (snapshot after snapshot).

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sensel/fisher.h"

namespace sensel {

enum class SnapshotFormat { kCsv, kRawF64 };

struct Grid {
  Index width = 0;
  Index height = 0;
};

struct SnapshotData {
  Eigen::MatrixXd x;                // n x m, one snapshot per column
  std::vector<std::uint8_t> mask;   // empty, or n flags (nonzero = valid)
  std::optional<Grid> grid;

  Index n() const { return x.rows(); }
  Index m() const { return x.cols(); }
  bool valid(Index i) const { return mask.empty() || mask[static_cast<size_t>(i)] != 0; }
};

// Throws FormatError / DataError.
SnapshotData ReadSnapshotsCsv(std::istream& in);
SnapshotData ReadSnapshotsRaw(std::istream& in);
SnapshotData LoadSnapshots(const std::filesystem::path& path, SnapshotFormat format);

// CSV uses 17 significant digits and cannot carry a mask.
void WriteSnapshotsCsv(std::ostream& out, const SnapshotData& data);
void WriteSnapshotsRaw(std::ostream& out, const SnapshotData& data);
void SaveSnapshots(const std::filesystem::path& path, const SnapshotData& data,
                   SnapshotFormat format);

struct PodOptions {
  bool subtract_mean = false;
};

struct PodModel {
  Index r = 0;
  Eigen::MatrixXd modes;            // n x r, orthonormal columns
  Eigen::VectorXd singular_values;  // r, nonincreasing
  Eigen::MatrixXd temporal;         // m x r, orthonormal columns
  Eigen::VectorXd mean;             // n; zero unless subtract_mean

  // Z = S V^T, the latent amplitudes of the training snapshots.
  Eigen::MatrixXd Amplitudes() const { return singular_values.asDiagonal() * temporal.transpose(); }
};

// Rank-r truncated SVD of the snapshot matrix with masked-out rows zeroed.
// Each mode is signed so its largest-magnitude entry is positive.
// Throws RankOutOfRange unless 1 <= r <= min(n, m).
PodModel PodTruncate(const SnapshotData& data, Index r, const PodOptions& options = {});

// Candidate rows for sensor selection: the valid rows of the modes, with the
// location each row came from.
struct SensorCandidates {
  CandidateMatrix cand;
  std::vector<Index> location;
};
SensorCandidates CandidatesFromPod(const PodModel& pod, std::span<const std::uint8_t> mask);

// K contiguous half-open segments [begin, end) over [0, m); the first m mod K
// segments get one extra snapshot. Throws FoldError unless 2 <= K <= m.
struct FoldPlan {
  Index k = 0;
  std::vector<std::pair<Index, Index>> segments;
};
FoldPlan MakeKFold(Index m, Index k);

// n x r i.i.d. N(0, 1) entries from Rng(seed), filled row by row.
CandidateMatrix GenRandomSystem(Index n, Index r, std::uint64_t seed);
// r x m i.i.d. N(0, 1) entries from Rng(seed), filled row by row.
Eigen::MatrixXd GenLatent(Index r, Index m, std::uint64_t seed);

// Smooth synthetic field on a width x height grid: `rank` leading modes plus
// `tail` weaker ones, every mode an orthonormalized sum of four random
// Gaussian bumps, mode j scaled by leading * decay^j, N(0, 1) temporal
// coefficients, and i.i.d. N(0, noise^2) measurement noise.
struct SyntheticSpec {
  Index width = 40;
  Index height = 25;
  Index m = 520;
  Index rank = 10;
  Index tail = 20;
  double leading = 10.0;
  double decay = 0.75;
  double noise = 0.05;
  std::uint64_t seed = 2021;
};
SnapshotData GenSyntheticSnapshots(const SyntheticSpec& spec);

}  // namespace sensel

#endif  // SENSEL_DATA_H_
