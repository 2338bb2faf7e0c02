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

#include "sensel/experiment.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <limits>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <sstream>
#include <tuple>

#include "sensel/error.h"
#include "sensel/rng.h"

namespace sensel {

namespace {

[[noreturn]] void ConfigFail(const std::string& what) { throw Error(ErrorCode::kConfigError, what); }

template <typename T>
T ParseNumber(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    ConfigFail("bad value '" + std::string(value) + "' for " + std::string(key));
  }
  return out;
}

bool ParseBool(std::string_view key, std::string_view value) {
  if (value == "1" || value == "true" || value == "yes") return true;
  if (value == "0" || value == "false" || value == "no") return false;
  ConfigFail("bad boolean '" + std::string(value) + "' for " + std::string(key));
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string Format(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string JoinIndices(const std::vector<Index>& indices) {
  std::string out;
  for (size_t k = 0; k < indices.size(); ++k) {
    if (k) out += ' ';
    out += std::to_string(indices[k]);
  }
  return out;
}

// Fills the Fisher indices and the reconstruction error of one selection.
void Evaluate(ExperimentRecord& record, const SensorSet& sensors, const Eigen::MatrixXd& y,
              const Eigen::MatrixXd& z_true) {
  const FisherInfo info = ComputeFisherInfo(sensors);
  record.det_index = DetIndex(info);
  record.min_eig_index = MinEigIndex(info);
  try {
    record.trace_inv_index = TraceInvIndex(info);
    record.recon_error = ReconstructionError(z_true, Estimate(sensors, y));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kSingularInformation) throw;
    record.trace_inv_index = std::numeric_limits<double>::infinity();
    record.recon_error = std::numeric_limits<double>::quiet_NaN();
  }
}

void SortRecords(std::vector<ExperimentRecord>& records) {
  std::sort(records.begin(), records.end(), [](const ExperimentRecord& a, const ExperimentRecord& b) {
    return std::tuple(static_cast<int>(a.method), a.p, a.trial) <
           std::tuple(static_cast<int>(b.method), b.p, b.trial);
  });
}

}  // namespace

std::vector<Index> ExperimentConfig::SensorCounts() const {
  std::vector<Index> counts;
  for (Index p = p_min; p <= p_max; p += p_step) counts.push_back(p);
  return counts;
}

void ValidateConfig(const ExperimentConfig& cfg) {
  if (cfg.r < 1) ConfigFail("r must be at least 1");
  if (cfg.p_min < 1 || cfg.p_min > cfg.p_max) ConfigFail("need 1 <= p-min <= p-max");
  if (cfg.p_step < 1) ConfigFail("p-step must be at least 1");
  if (cfg.trials < 1) ConfigFail("trials must be at least 1");
  if (cfg.methods.empty()) ConfigFail("at least one method is required");
  if (cfg.sigma < 0.0) ConfigFail("sigma must be nonnegative");
  for (Method m : cfg.methods) {
    if (m == Method::kBrute) ConfigFail("brute force is not an experiment method");
  }
  switch (cfg.mode) {
    case Mode::kRandom:
      if (cfg.n < 1) ConfigFail("n must be at least 1");
      if (cfg.p_max > cfg.n) ConfigFail("p-max exceeds n");
      break;
    case Mode::kCv:
      if (!cfg.data_path) ConfigFail("cross-validation needs --data");
      if (cfg.k < 2) ConfigFail("k must be at least 2");
      break;
    case Mode::kSubmod:
      break;
  }
}

void ApplyConfigValue(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  key = Trim(key);
  value = Trim(value);
  if (key == "mode") {
    if (value == "random") {
      cfg.mode = Mode::kRandom;
    } else if (value == "cv") {
      cfg.mode = Mode::kCv;
    } else if (value == "submod") {
      cfg.mode = Mode::kSubmod;
    } else {
      ConfigFail("unknown mode '" + std::string(value) + "'");
    }
  } else if (key == "n") {
    cfg.n = ParseNumber<Index>(key, value);
  } else if (key == "r") {
    cfg.r = ParseNumber<Index>(key, value);
  } else if (key == "p-min") {
    cfg.p_min = ParseNumber<Index>(key, value);
  } else if (key == "p-max") {
    cfg.p_max = ParseNumber<Index>(key, value);
  } else if (key == "p-step") {
    cfg.p_step = ParseNumber<Index>(key, value);
  } else if (key == "trials") {
    cfg.trials = ParseNumber<Index>(key, value);
  } else if (key == "seed") {
    cfg.seed = ParseNumber<std::uint64_t>(key, value);
  } else if (key == "k") {
    cfg.k = ParseNumber<Index>(key, value);
  } else if (key == "methods") {
    cfg.methods.clear();
    size_t start = 0;
    while (start <= value.size()) {
      const size_t comma = value.find(',', start);
      const std::string_view name = Trim(value.substr(start, comma - start));
      const auto method = ParseMethod(name);
      if (!method) ConfigFail("unknown method '" + std::string(name) + "'");
      cfg.methods.push_back(*method);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  } else if (key == "epsilon") {
    cfg.epsilon = ParseNumber<double>(key, value);
  } else if (key == "sigma") {
    cfg.sigma = ParseNumber<double>(key, value);
  } else if (key == "data") {
    cfg.data_path = std::string(value);
  } else if (key == "format") {
    if (value == "csv") {
      cfg.format = SnapshotFormat::kCsv;
    } else if (value == "raw") {
      cfg.format = SnapshotFormat::kRawF64;
    } else {
      ConfigFail("format must be csv or raw");
    }
  } else if (key == "out") {
    cfg.out_dir = std::string(value);
  } else if (key == "subtract-mean") {
    cfg.subtract_mean = ParseBool(key, value);
  } else if (key == "self-test") {
    cfg.cv_self_test = ParseBool(key, value);
  } else {
    ConfigFail("unknown key '" + std::string(key) + "'");
  }
}

void ApplyConfigText(ExperimentConfig& cfg, std::istream& in) {
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view text = Trim(line);
    if (text.empty() || text.front() == '#') continue;
    const size_t eq = text.find('=');
    if (eq == std::string_view::npos) {
      ConfigFail("line " + std::to_string(number) + " is not key=value");
    }
    ApplyConfigValue(cfg, text.substr(0, eq), text.substr(eq + 1));
  }
}

std::vector<ExperimentRecord> RunRandom(const ExperimentConfig& cfg) {
  ValidateConfig(cfg);
  const std::vector<Index> counts = cfg.SensorCounts();
  std::vector<ExperimentRecord> records;
  for (Index trial = 0; trial < cfg.trials; ++trial) {
    const auto t = static_cast<std::uint64_t>(trial);
    const CandidateMatrix cand = GenRandomSystem(cfg.n, cfg.r, DeriveSeed(cfg.seed, t, 0));
    const Eigen::MatrixXd z = GenLatent(cfg.r, 1, DeriveSeed(cfg.seed, t, 1));
    // One noise draw per location, shared by every method that picks it.
    const Eigen::MatrixXd noise = GenLatent(cfg.n, 1, DeriveSeed(cfg.seed, t, 2));
    const Eigen::MatrixXd clean = cand.rows() * z;
    for (Method method : cfg.methods) {
      for (Index p : counts) {
        const SelectionResult sel =
            Select(method, cand, p, DeriveSeed(cfg.seed, t, 3 + static_cast<std::uint64_t>(p)));
        const SensorSet sensors = BuildMeasurement(cand, sel.indices);
        Eigen::MatrixXd y(p, 1);
        for (Index k = 0; k < p; ++k) {
          const Index i = sel.indices[static_cast<size_t>(k)];
          y(k, 0) = clean(i, 0) + cfg.sigma * noise(i, 0);
        }
        ExperimentRecord record{method, p, trial, sel.indices};
        record.wall_time_s = sel.wall_time_s;
        Evaluate(record, sensors, y, z);
        records.push_back(std::move(record));
      }
    }
  }
  SortRecords(records);
  return records;
}

std::vector<ExperimentRecord> RunCv(const ExperimentConfig& cfg, const SnapshotData& data) {
  const std::vector<Index> counts = cfg.SensorCounts();
  const Index m = data.m();
  std::vector<std::pair<Index, Index>> tests;
  if (cfg.cv_self_test) {
    tests.emplace_back(0, m);
  } else {
    tests = MakeKFold(m, cfg.k).segments;
  }
  std::vector<ExperimentRecord> records;
  for (size_t fold = 0; fold < tests.size(); ++fold) {
    const auto [begin, end] = tests[fold];
    SnapshotData train{Eigen::MatrixXd(data.n(), 0), data.mask, data.grid};
    if (cfg.cv_self_test) {
      train.x = data.x;
    } else {
      train.x.resize(data.n(), m - (end - begin));
      train.x.leftCols(begin) = data.x.leftCols(begin);
      train.x.rightCols(m - end) = data.x.rightCols(m - end);
    }
    const PodModel pod = PodTruncate(train, cfg.r, PodOptions{cfg.subtract_mean});
    const SensorCandidates sc = CandidatesFromPod(pod, data.mask);

    Eigen::MatrixXd x_test = data.x.middleCols(begin, end - begin);
    x_test.colwise() -= pod.mean;
    for (Index i = 0; i < data.n(); ++i) {
      if (!data.valid(i)) x_test.row(i).setZero();
    }
    const Eigen::MatrixXd z_true = pod.modes.transpose() * x_test;

    for (Method method : cfg.methods) {
      for (Index p : counts) {
        if (p > sc.cand.n()) ConfigFail("p exceeds the number of valid locations");
        const auto f = static_cast<std::uint64_t>(fold);
        const SelectionResult sel =
            Select(method, sc.cand, p, DeriveSeed(cfg.seed, f, 3 + static_cast<std::uint64_t>(p)));
        const SensorSet sensors = BuildMeasurement(sc.cand, sel.indices);
        Eigen::MatrixXd y(p, x_test.cols());
        std::vector<Index> locations;
        for (Index k = 0; k < p; ++k) {
          const Index loc = sc.location[static_cast<size_t>(sel.indices[static_cast<size_t>(k)])];
          locations.push_back(loc);
          y.row(k) = x_test.row(loc);
        }
        ExperimentRecord record{method, p, static_cast<Index>(fold), std::move(locations)};
        record.wall_time_s = sel.wall_time_s;
        Evaluate(record, sensors, y, z_true);
        records.push_back(std::move(record));
      }
    }
  }
  SortRecords(records);
  return records;
}

std::vector<SummaryRow> Summarize(const std::vector<ExperimentRecord>& records) {
  static const char* kMetrics[] = {"det_index", "trace_inv_index", "min_eig_index", "recon_error",
                                   "wall_time_s"};
  using Key = std::pair<int, Index>;
  std::map<Key, std::array<double, 5>> sums;
  std::map<Key, Index> counts;
  for (const ExperimentRecord& rec : records) {
    const Key key{static_cast<int>(rec.method), rec.p};
    auto& acc = sums[key];
    acc[0] += rec.det_index;
    acc[1] += rec.trace_inv_index;
    acc[2] += rec.min_eig_index;
    acc[3] += rec.recon_error;
    acc[4] += rec.wall_time_s;
    ++counts[key];
  }
  std::map<Key, std::array<double, 5>> means;
  for (const auto& [key, acc] : sums) {
    auto& mean = means[key];
    for (size_t j = 0; j < 5; ++j) mean[j] = acc[j] / static_cast<double>(counts[key]);
  }
  std::vector<SummaryRow> rows;
  for (const auto& [key, mean] : means) {
    for (size_t j = 0; j < 5; ++j) {
      rows.push_back({static_cast<Method>(key.first), key.second, kMetrics[j], mean[j]});
    }
    const auto dg = means.find(Key{static_cast<int>(Method::kDG), key.second});
    if (dg == means.end()) continue;
    for (size_t j = 0; j < 5; ++j) {
      rows.push_back({static_cast<Method>(key.first), key.second, std::string(kMetrics[j]) + "_norm",
                      mean[j] / dg->second[j]});
    }
  }
  return rows;
}

void WriteRecordsCsv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  out << "method,p,trial,det_index,trace_inv_index,min_eig_index,recon_error,wall_time_s,indices\n";
  for (const ExperimentRecord& rec : records) {
    out << MethodName(rec.method) << ',' << rec.p << ',' << rec.trial << ',' << Format(rec.det_index)
        << ',' << Format(rec.trace_inv_index) << ',' << Format(rec.min_eig_index) << ','
        << Format(rec.recon_error) << ',' << Format(rec.wall_time_s) << ','
        << JoinIndices(rec.indices) << '\n';
  }
}

void WriteSummaryCsv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "method,p,metric,value\n";
  for (const SummaryRow& row : rows) {
    out << MethodName(row.method) << ',' << row.p << ',' << row.metric << ',' << Format(row.value)
        << '\n';
  }
}

SubmodReport RunSubmodReport(const ExperimentConfig& cfg) {
  const double eps = cfg.epsilon > 0.0 ? cfg.epsilon : 1e-3;
  SubmodReport report;
  report.counterexample = MakeCounterexampleReport();

  const CandidateMatrix embedded(CounterexampleMatrix());
  const Index r = embedded.r();
  CheckOptions full;
  full.max_set_size = 5;
  CheckOptions over_regime = full;
  over_regime.min_set_size = r + 1;

  auto add = [&report](std::string name, const SetObjective& obj, bool submodular,
                       const CheckOptions& options) {
    report.checks.push_back({std::move(name), std::string(SetKindName(obj.kind())),
                             submodular ? CheckSubmodular(obj, options) : CheckMonotone(obj, options)});
  };
  const SetObjective a_eps(SetKind::kAEps, embedded, eps);
  const SetObjective e_raw(SetKind::kERaw, embedded);
  add("embedded/submodular", a_eps, true, full);
  add("embedded/monotone", a_eps, false, full);
  add("embedded/submodular", e_raw, true, full);
  add("embedded/monotone(|S|>r)", e_raw, false, over_regime);
  add("embedded/monotone", SetObjective(SetKind::kEGramRow, embedded), false, full);

  for (std::uint64_t j = 0; j < 20; ++j) {
    const CandidateMatrix cand = GenRandomSystem(7, 3, DeriveSeed(cfg.seed, 100 + j));
    const SetObjective obj(SetKind::kAEps, cand, eps);
    add("gaussian7x3#" + std::to_string(j) + "/submodular", obj, true, full);
    add("gaussian7x3#" + std::to_string(j) + "/monotone", obj, false, full);
  }

  for (Index j = 0; j < 50; ++j) {
    const Index n = 12 + j % 3;
    const Index p = 3 + (j / 3) % 2;
    const CandidateMatrix cand =
        GenRandomSystem(n, 3, DeriveSeed(cfg.seed, 200 + static_cast<std::uint64_t>(j)));
    report.nemhauser.push_back({j, n, p, NemhauserCheck(cand, p, eps)});
  }
  return report;
}

void WriteSubmodText(std::ostream& out, const SubmodReport& report) {
  WriteCounterexampleText(out, report.counterexample);
  out << '\n';
  for (const NamedCheck& check : report.checks) {
    WriteReportText(out, check.kind + " " + check.name, check.report);
  }
  double worst = 1.0;
  bool all_hold = true;
  for (const NemhauserRow& row : report.nemhauser) {
    worst = std::min(worst, row.result.ratio);
    all_hold = all_hold && row.result.bound_holds;
  }
  out << "\nNemhauser bound over " << report.nemhauser.size()
      << " instances: worst ratio " << Format(worst) << " (bound 1 - 1/e) -> "
      << (all_hold ? "holds" : "violated") << '\n';
}

void WriteSubmodChecksCsv(std::ostream& out, const SubmodReport& report) {
  out << "check,kind,checked,submodular_violations,supermodular_violations,monotone_violations\n";
  for (const NamedCheck& c : report.checks) {
    out << c.name << ',' << c.kind << ',' << c.report.checked_pairs << ','
        << c.report.submodular_violation_count << ',' << c.report.supermodular_violation_count << ','
        << c.report.monotone_violation_count << '\n';
  }
}

void WriteSubmodWitnessCsv(std::ostream& out, const SubmodReport& report) {
  out << "check,";
  WriteReportCsv(out, ModularityReport{});
  for (const NamedCheck& c : report.checks) {
    std::ostringstream rows;
    WriteReportCsv(rows, c.report);
    std::istringstream lines(rows.str());
    std::string line;
    std::getline(lines, line);  // header
    while (std::getline(lines, line)) out << c.kind << ' ' << c.name << ',' << line << '\n';
  }
}

void WriteNemhauserCsv(std::ostream& out, const SubmodReport& report) {
  out << "instance,n,p,greedy_value,opt_value,ratio,bound_holds,greedy_indices,optimal_indices\n";
  for (const NemhauserRow& row : report.nemhauser) {
    out << row.instance << ',' << row.n << ',' << row.p << ',' << Format(row.result.greedy_value)
        << ',' << Format(row.result.opt_value) << ',' << Format(row.result.ratio) << ','
        << (row.result.bound_holds ? 1 : 0) << ',' << JoinIndices(row.result.greedy_indices) << ','
        << JoinIndices(row.result.optimal_indices) << '\n';
  }
}

}  // namespace sensel
