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

// Command-line front end: random-system sweeps, cross-validation,
// set-function reports, one-shot selection and synthetic data.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sensel/data.h"
#include "sensel/error.h"
#include "sensel/experiment.h"
#include "sensel/selectors.h"

namespace {

namespace fs = std::filesystem;
using sensel::Error;
using sensel::ErrorCode;

struct Setting {
  std::string key;
  std::string value;
  CLI::Option* option = nullptr;
};

// Registers the experiment flags on `cmd`; values are applied later so
// that a --config file can be read first and overridden by flags.
void AddExperimentFlags(CLI::App* cmd, std::vector<Setting>& settings, std::string& config_path) {
  static const char* kKeys[][2] = {
      {"n", "number of candidate locations"},
      {"r", "latent dimension"},
      {"p-min", "smallest sensor count"},
      {"p-max", "largest sensor count"},
      {"p-step", "sensor count increment"},
      {"trials", "random trials"},
      {"seed", "master seed"},
      {"k", "cross-validation folds"},
      {"methods", "comma-separated list of dg,ag,eg,random"},
      {"epsilon", "regularization for set functions"},
      {"sigma", "observation noise standard deviation"},
      {"data", "snapshot file"},
      {"format", "csv or raw"},
      {"out", "output directory"},
  };
  settings.reserve(std::size(kKeys) + 2);
  for (const auto& [key, help] : kKeys) {
    settings.push_back({key, "", nullptr});
    settings.back().option = cmd->add_option(std::string("--") + key, settings.back().value, help);
  }
  settings.push_back({"subtract-mean", "true", nullptr});
  settings.back().option = cmd->add_flag("--subtract-mean", "remove the training mean before POD");
  settings.push_back({"self-test", "true", nullptr});
  settings.back().option = cmd->add_flag("--self-test", "test on the training snapshots");
  cmd->add_option("--config", config_path, "key=value configuration file");
}

sensel::ExperimentConfig BuildConfig(sensel::Mode mode, const std::vector<Setting>& settings,
                                     const std::string& config_path) {
  sensel::ExperimentConfig cfg;
  cfg.mode = mode;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw Error(ErrorCode::kConfigError, "cannot open " + config_path);
    sensel::ApplyConfigText(cfg, in);
    cfg.mode = mode;
  }
  for (const Setting& s : settings) {
    if (s.option->count() > 0) sensel::ApplyConfigValue(cfg, s.key, s.value);
  }
  sensel::ValidateConfig(cfg);
  return cfg;
}

std::ofstream OpenOutput(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kConfigError, "cannot write " + path.string());
  return out;
}

void WriteRecords(const fs::path& dir, const std::string& stem,
                  const std::vector<sensel::ExperimentRecord>& records) {
  std::ofstream out = OpenOutput(dir / (stem + ".csv"));
  sensel::WriteRecordsCsv(out, records);
  std::ofstream summary = OpenOutput(dir / (stem + "_summary.csv"));
  sensel::WriteSummaryCsv(summary, sensel::Summarize(records));
  std::printf("wrote %s and %s\n", (dir / (stem + ".csv")).c_str(),
              (dir / (stem + "_summary.csv")).c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Greedy sensor selection under D-, A- and E-optimality"};
  app.require_subcommand(1);

  std::vector<Setting> random_settings, cv_settings, submod_settings;
  std::string random_config, cv_config, submod_config;
  CLI::App* random = app.add_subcommand("random", "random-system sweep");
  AddExperimentFlags(random, random_settings, random_config);
  CLI::App* cv = app.add_subcommand("cv", "K-fold cross-validation on snapshot data");
  AddExperimentFlags(cv, cv_settings, cv_config);
  CLI::App* submod = app.add_subcommand("submod", "set-function report");
  AddExperimentFlags(submod, submod_settings, submod_config);

  CLI::App* select = app.add_subcommand("select", "select sensors from a candidate matrix");
  std::string select_data, select_format = "csv", select_method = "ag";
  long long select_p = 0;
  std::uint64_t select_seed = 1;
  select->add_option("--data", select_data, "candidate matrix, one row per location")->required();
  select->add_option("--format", select_format, "csv or raw");
  select->add_option("--p", select_p, "number of sensors")->required();
  select->add_option("--method", select_method, "dg, ag, eg, random or brute");
  select->add_option("--seed", select_seed, "seed for the random method");

  CLI::App* synth = app.add_subcommand("synth", "write a synthetic snapshot dataset");
  sensel::SyntheticSpec spec;
  std::string synth_out, synth_format = "raw";
  synth->add_option("--out", synth_out, "output file")->required();
  synth->add_option("--format", synth_format, "csv or raw");
  synth->add_option("--seed", spec.seed, "seed");
  synth->add_option("--width", spec.width, "grid width");
  synth->add_option("--height", spec.height, "grid height");
  synth->add_option("--m", spec.m, "snapshot count");
  synth->add_option("--rank", spec.rank, "leading modes");
  synth->add_option("--tail", spec.tail, "weak trailing modes");
  synth->add_option("--noise", spec.noise, "noise standard deviation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  auto parse_format = [](const std::string& name) {
    if (name == "csv") return sensel::SnapshotFormat::kCsv;
    if (name == "raw") return sensel::SnapshotFormat::kRawF64;
    throw Error(ErrorCode::kConfigError, "format must be csv or raw");
  };

  try {
    if (random->parsed()) {
      const auto cfg = BuildConfig(sensel::Mode::kRandom, random_settings, random_config);
      WriteRecords(cfg.out_dir, "random_records", sensel::RunRandom(cfg));
    } else if (cv->parsed()) {
      const auto cfg = BuildConfig(sensel::Mode::kCv, cv_settings, cv_config);
      const sensel::SnapshotData data = sensel::LoadSnapshots(*cfg.data_path, cfg.format);
      WriteRecords(cfg.out_dir, "cv_records", sensel::RunCv(cfg, data));
    } else if (submod->parsed()) {
      const auto cfg = BuildConfig(sensel::Mode::kSubmod, submod_settings, submod_config);
      const sensel::SubmodReport report = sensel::RunSubmodReport(cfg);
      const fs::path dir = cfg.out_dir;
      std::ofstream text = OpenOutput(dir / "submod_report.txt");
      sensel::WriteSubmodText(text, report);
      std::ofstream checks = OpenOutput(dir / "submod_checks.csv");
      sensel::WriteSubmodChecksCsv(checks, report);
      std::ofstream witnesses = OpenOutput(dir / "submod_witnesses.csv");
      sensel::WriteSubmodWitnessCsv(witnesses, report);
      std::ofstream nemhauser = OpenOutput(dir / "submod_nemhauser.csv");
      sensel::WriteNemhauserCsv(nemhauser, report);
      sensel::WriteSubmodText(std::cout, report);
    } else if (select->parsed()) {
      const auto method = sensel::ParseMethod(select_method);
      if (!method) throw Error(ErrorCode::kConfigError, "unknown method " + select_method);
      const sensel::SnapshotData data = sensel::LoadSnapshots(select_data, parse_format(select_format));
      const sensel::CandidateMatrix cand(data.x);
      const sensel::SelectionResult result = sensel::Select(*method, cand, select_p, select_seed);
      for (size_t k = 0; k < result.indices.size(); ++k) {
        std::printf(k ? " %lld" : "%lld", static_cast<long long>(result.indices[k]));
      }
      std::printf("\n");
    } else if (synth->parsed()) {
      sensel::SaveSnapshots(synth_out, sensel::GenSyntheticSnapshots(spec), parse_format(synth_format));
      std::printf("wrote %s\n", synth_out.c_str());
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "sensel: %s\n", e.what());
    return sensel::ExitCodeFor(e.code());
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "sensel: %s\n", e.what());
    return 2;
  }
  return 0;
}
