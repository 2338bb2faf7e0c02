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

#ifndef SENSEL_EXPERIMENT_H_
#define SENSEL_EXPERIMENT_H_

// Experiment harness behind the CLI: random-system sweeps, K-fold
// cross-validation on snapshot data, and the set-function report.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sensel/data.h"
#include "sensel/selectors.h"
#include "sensel/submod.h"

namespace sensel {

enum class Mode { kRandom, kCv, kSubmod };

struct ExperimentConfig {
  Mode mode = Mode::kRandom;
  Index n = 500;
  Index r = 10;
  Index p_min = 1;
  Index p_max = 20;
  Index p_step = 1;
  Index trials = 200;
  std::uint64_t seed = 1;
  Index k = 5;
  std::vector<Method> methods = {Method::kDG, Method::kAG, Method::kEG, Method::kRandom};
  std::optional<std::string> data_path;
  SnapshotFormat format = SnapshotFormat::kCsv;
  double epsilon = 0.0;  // <= 0 picks a per-mode default
  double sigma = 0.0;
  bool subtract_mean = false;
  bool cv_self_test = false;  // test on the training snapshots, no folds
  std::string out_dir = ".";

  std::vector<Index> SensorCounts() const;
};

// Throws ConfigError.
void ValidateConfig(const ExperimentConfig& cfg);

// Applies one key=value setting (keys as in the CLI flags without the
// leading dashes, e.g. "p-min"). Throws ConfigError.
void ApplyConfigValue(ExperimentConfig& cfg, std::string_view key, std::string_view value);

// Reads key=value lines; blank lines and lines starting with '#' are skipped.
void ApplyConfigText(ExperimentConfig& cfg, std::istream& in);

struct ExperimentRecord {
  Method method;
  Index p = 0;
  Index trial = 0;  // fold index for cross-validation
  std::vector<Index> indices;
  double det_index = 0.0;
  double trace_inv_index = 0.0;
  double min_eig_index = 0.0;
  double recon_error = 0.0;
  double wall_time_s = 0.0;
};

// Trial t draws U from DeriveSeed(seed, t, 0), z (r x 1) from
// DeriveSeed(seed, t, 1), per-location noise from DeriveSeed(seed, t, 2),
// and the random baseline from DeriveSeed(seed, t, 3 + p).
// Records come back sorted by (method, p, trial).
std::vector<ExperimentRecord> RunRandom(const ExperimentConfig& cfg);

// Per-fold records; `trial` is the fold index and `indices` are locations
// in the snapshot grid.
std::vector<ExperimentRecord> RunCv(const ExperimentConfig& cfg, const SnapshotData& data);

struct SummaryRow {
  Method method;
  Index p;
  std::string metric;
  double value;
};

// Per-(method, p) means of every metric, then "<metric>_norm": the mean
// divided by DG's mean at the same p (only when DG is present).
std::vector<SummaryRow> Summarize(const std::vector<ExperimentRecord>& records);

// RFC 4180 CSV. Indices go in one space-separated field.
void WriteRecordsCsv(std::ostream& out, const std::vector<ExperimentRecord>& records);
void WriteSummaryCsv(std::ostream& out, const std::vector<SummaryRow>& rows);

struct NamedCheck {
  std::string name;
  std::string kind;
  ModularityReport report;
};

struct NemhauserRow {
  Index instance;
  Index n;
  Index p;
  NemhauserResult result;
};

struct SubmodReport {
  CounterexampleReport counterexample;
  std::vector<NamedCheck> checks;
  std::vector<NemhauserRow> nemhauser;
};

// Checks on the embedded counterexample matrix and on 20 seeded 7 x 3
// Gaussian matrices, plus Nemhauser ratios on 50 seeded instances with
// n in {12, 13, 14}, r = 3, p in {3, 4}. cfg.epsilon <= 0 means 1e-3.
SubmodReport RunSubmodReport(const ExperimentConfig& cfg);

void WriteSubmodText(std::ostream& out, const SubmodReport& report);
void WriteSubmodChecksCsv(std::ostream& out, const SubmodReport& report);
void WriteSubmodWitnessCsv(std::ostream& out, const SubmodReport& report);
void WriteNemhauserCsv(std::ostream& out, const SubmodReport& report);

}  // namespace sensel

#endif  // SENSEL_EXPERIMENT_H_
