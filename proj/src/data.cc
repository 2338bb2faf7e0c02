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

#include "sensel/data.h"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "sensel/error.h"
#include "sensel/rng.h"

namespace sensel {

namespace {

constexpr std::array<char, 4> kMagic = {'S', 'N', 'A', 'P'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kMaskFlag = 1;

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> SplitCommas(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    fields.push_back(Trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

Index ParseCount(std::string_view field) {
  Index value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || value < 1) {
    throw Error(ErrorCode::kFormatError, "bad header field '" + std::string(field) + "'");
  }
  return value;
}

double ParseValue(std::string_view field) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw Error(ErrorCode::kFormatError, "bad value '" + std::string(field) + "'");
  }
  return value;
}

void ValidateFinite(const SnapshotData& data) {
  for (Index i = 0; i < data.n(); ++i) {
    if (!data.valid(i)) continue;
    if (!data.x.row(i).allFinite()) {
      throw Error(ErrorCode::kDataError,
                  "non-finite value at valid location " + std::to_string(i));
    }
  }
}

template <typename T>
T ReadLittle(const unsigned char* bytes) {
  T value = 0;
  for (size_t b = 0; b < sizeof(T); ++b) value |= static_cast<T>(bytes[b]) << (8 * b);
  return value;
}

template <typename T>
void PutLittle(unsigned char* bytes, T value) {
  for (size_t b = 0; b < sizeof(T); ++b) bytes[b] = static_cast<unsigned char>(value >> (8 * b));
}

}  // namespace

SnapshotData ReadSnapshotsCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kFormatError, "missing CSV header");
  const auto header = SplitCommas(line);
  if (header.size() != 2 && header.size() != 4) {
    throw Error(ErrorCode::kFormatError, "CSV header must be n,m or n,m,width,height");
  }
  SnapshotData data;
  const Index n = ParseCount(header[0]);
  const Index m = ParseCount(header[1]);
  if (header.size() == 4) {
    data.grid = Grid{ParseCount(header[2]), ParseCount(header[3])};
    if (data.grid->width * data.grid->height != n) {
      throw Error(ErrorCode::kFormatError, "grid width * height differs from n");
    }
  }
  data.x.resize(n, m);
  for (Index j = 0; j < m; ++j) {
    if (!std::getline(in, line)) {
      throw Error(ErrorCode::kFormatError, "CSV ends after " + std::to_string(j) + " snapshots");
    }
    const auto fields = SplitCommas(line);
    if (static_cast<Index>(fields.size()) != n) {
      throw Error(ErrorCode::kFormatError, "snapshot " + std::to_string(j) + " has " +
                                               std::to_string(fields.size()) + " values");
    }
    for (Index i = 0; i < n; ++i) data.x(i, j) = ParseValue(fields[static_cast<size_t>(i)]);
  }
  while (std::getline(in, line)) {
    if (!Trim(line).empty()) throw Error(ErrorCode::kFormatError, "trailing data after snapshots");
  }
  ValidateFinite(data);
  return data;
}

SnapshotData ReadSnapshotsRaw(std::istream& in) {
  std::array<unsigned char, 32> header{};
  if (!in.read(reinterpret_cast<char*>(header.data()), header.size())) {
    throw Error(ErrorCode::kFormatError, "RAW header shorter than 32 bytes");
  }
  if (!std::equal(kMagic.begin(), kMagic.end(), header.begin(),
                  [](char a, unsigned char b) { return static_cast<unsigned char>(a) == b; })) {
    throw Error(ErrorCode::kFormatError, "bad magic");
  }
  if (ReadLittle<std::uint32_t>(&header[4]) != kVersion) {
    throw Error(ErrorCode::kFormatError, "unsupported RAW version");
  }
  const auto n = ReadLittle<std::uint64_t>(&header[8]);
  const auto m = ReadLittle<std::uint64_t>(&header[16]);
  const auto flags = ReadLittle<std::uint32_t>(&header[24]);
  if (n == 0 || m == 0 || n > (std::uint64_t{1} << 40) || m > (std::uint64_t{1} << 40) ||
      n > (std::uint64_t{1} << 60) / m) {
    throw Error(ErrorCode::kFormatError, "implausible dimensions in RAW header");
  }
  const bool has_mask = (flags & kMaskFlag) != 0;
  const std::uint64_t payload = (has_mask ? n : 0) + n * m * 8;

  // Refuse to allocate for a payload the stream cannot hold.
  const auto here = in.tellg();
  if (here != std::streampos(-1)) {
    in.seekg(0, std::ios::end);
    const auto end = in.tellg();
    in.seekg(here);
    if (end != std::streampos(-1) && static_cast<std::uint64_t>(end - here) < payload) {
      throw Error(ErrorCode::kFormatError, "RAW payload truncated");
    }
  }

  SnapshotData data;
  if (has_mask) {
    data.mask.resize(n);
    if (!in.read(reinterpret_cast<char*>(data.mask.data()), static_cast<std::streamsize>(n))) {
      throw Error(ErrorCode::kFormatError, "RAW mask truncated");
    }
  }
  data.x.resize(static_cast<Index>(n), static_cast<Index>(m));
  std::vector<unsigned char> column(n * 8);
  for (std::uint64_t j = 0; j < m; ++j) {
    if (!in.read(reinterpret_cast<char*>(column.data()), static_cast<std::streamsize>(column.size()))) {
      throw Error(ErrorCode::kFormatError, "RAW payload truncated");
    }
    for (std::uint64_t i = 0; i < n; ++i) {
      data.x(static_cast<Index>(i), static_cast<Index>(j)) =
          std::bit_cast<double>(ReadLittle<std::uint64_t>(&column[i * 8]));
    }
  }
  ValidateFinite(data);
  return data;
}

SnapshotData LoadSnapshots(const std::filesystem::path& path, SnapshotFormat format) {
  std::ifstream in(path, format == SnapshotFormat::kRawF64 ? std::ios::binary : std::ios::in);
  if (!in) throw Error(ErrorCode::kDataError, "cannot open " + path.string());
  return format == SnapshotFormat::kCsv ? ReadSnapshotsCsv(in) : ReadSnapshotsRaw(in);
}

void WriteSnapshotsCsv(std::ostream& out, const SnapshotData& data) {
  if (!data.mask.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "the CSV format cannot carry a location mask");
  }
  out << data.n() << ',' << data.m();
  if (data.grid) out << ',' << data.grid->width << ',' << data.grid->height;
  out << '\n';
  char buffer[32];
  for (Index j = 0; j < data.m(); ++j) {
    for (Index i = 0; i < data.n(); ++i) {
      std::snprintf(buffer, sizeof(buffer), "%.17g", data.x(i, j));
      if (i) out << ',';
      out << buffer;
    }
    out << '\n';
  }
}

void WriteSnapshotsRaw(std::ostream& out, const SnapshotData& data) {
  std::array<unsigned char, 32> header{};
  std::copy(kMagic.begin(), kMagic.end(), header.begin());
  PutLittle<std::uint32_t>(&header[4], kVersion);
  PutLittle<std::uint64_t>(&header[8], static_cast<std::uint64_t>(data.n()));
  PutLittle<std::uint64_t>(&header[16], static_cast<std::uint64_t>(data.m()));
  PutLittle<std::uint32_t>(&header[24], data.mask.empty() ? 0 : kMaskFlag);
  out.write(reinterpret_cast<const char*>(header.data()), header.size());
  if (!data.mask.empty()) {
    out.write(reinterpret_cast<const char*>(data.mask.data()),
              static_cast<std::streamsize>(data.mask.size()));
  }
  std::vector<unsigned char> column(static_cast<size_t>(data.n()) * 8);
  for (Index j = 0; j < data.m(); ++j) {
    for (Index i = 0; i < data.n(); ++i) {
      PutLittle<std::uint64_t>(&column[static_cast<size_t>(i) * 8],
                               std::bit_cast<std::uint64_t>(data.x(i, j)));
    }
    out.write(reinterpret_cast<const char*>(column.data()), static_cast<std::streamsize>(column.size()));
  }
}

void SaveSnapshots(const std::filesystem::path& path, const SnapshotData& data,
                   SnapshotFormat format) {
  std::ofstream out(path, format == SnapshotFormat::kRawF64 ? std::ios::binary : std::ios::out);
  if (!out) throw Error(ErrorCode::kDataError, "cannot write " + path.string());
  if (format == SnapshotFormat::kCsv) {
    WriteSnapshotsCsv(out, data);
  } else {
    WriteSnapshotsRaw(out, data);
  }
}

PodModel PodTruncate(const SnapshotData& data, Index r, const PodOptions& options) {
  if (r < 1 || r > std::min(data.n(), data.m())) {
    throw Error(ErrorCode::kRankOutOfRange, "rank " + std::to_string(r) + " outside [1, " +
                                                std::to_string(std::min(data.n(), data.m())) + "]");
  }
  Eigen::MatrixXd x = data.x;
  for (Index i = 0; i < data.n(); ++i) {
    if (!data.valid(i)) x.row(i).setZero();
  }
  PodModel pod;
  pod.r = r;
  pod.mean = Eigen::VectorXd::Zero(data.n());
  if (options.subtract_mean) {
    pod.mean = x.rowwise().mean();
    x.colwise() -= pod.mean;
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  pod.modes = svd.matrixU().leftCols(r);
  pod.singular_values = svd.singularValues().head(r);
  pod.temporal = svd.matrixV().leftCols(r);
  for (Index i = 0; i < data.n(); ++i) {
    if (!data.valid(i)) pod.modes.row(i).setZero();
  }
  for (Index j = 0; j < r; ++j) {
    Index peak = 0;
    pod.modes.col(j).cwiseAbs().maxCoeff(&peak);
    if (pod.modes(peak, j) < 0.0) {
      pod.modes.col(j) *= -1.0;
      pod.temporal.col(j) *= -1.0;
    }
  }
  return pod;
}

SensorCandidates CandidatesFromPod(const PodModel& pod, std::span<const std::uint8_t> mask) {
  std::vector<Index> location;
  for (Index i = 0; i < pod.modes.rows(); ++i) {
    if (mask.empty() || mask[static_cast<size_t>(i)] != 0) location.push_back(i);
  }
  if (location.empty()) throw Error(ErrorCode::kDataError, "mask leaves no valid locations");
  Eigen::MatrixXd rows(static_cast<Index>(location.size()), pod.r);
  for (size_t k = 0; k < location.size(); ++k) rows.row(static_cast<Index>(k)) = pod.modes.row(location[k]);
  return SensorCandidates{CandidateMatrix(std::move(rows)), std::move(location)};
}

FoldPlan MakeKFold(Index m, Index k) {
  if (k < 2 || k > m) {
    throw Error(ErrorCode::kFoldError, "fold count " + std::to_string(k) + " outside [2, " +
                                           std::to_string(m) + "]");
  }
  FoldPlan plan{k, {}};
  const Index base = m / k;
  const Index extra = m % k;
  Index begin = 0;
  for (Index f = 0; f < k; ++f) {
    const Index size = base + (f < extra ? 1 : 0);
    plan.segments.emplace_back(begin, begin + size);
    begin += size;
  }
  return plan;
}

CandidateMatrix GenRandomSystem(Index n, Index r, std::uint64_t seed) {
  return CandidateMatrix(GenLatent(n, r, seed));
}

Eigen::MatrixXd GenLatent(Index r, Index m, std::uint64_t seed) {
  if (r < 1 || m < 1) throw Error(ErrorCode::kInvalidArgument, "dimensions must be positive");
  Rng rng(seed);
  Eigen::MatrixXd out(r, m);
  for (Index i = 0; i < r; ++i) {
    for (Index j = 0; j < m; ++j) out(i, j) = rng.Normal();
  }
  return out;
}

SnapshotData GenSyntheticSnapshots(const SyntheticSpec& spec) {
  const Index n = spec.width * spec.height;
  const Index modes = spec.rank + spec.tail;
  if (n < 1 || spec.m < 1 || spec.rank < 1 || spec.tail < 0 || modes > n) {
    throw Error(ErrorCode::kInvalidArgument, "inconsistent synthetic dataset shape");
  }
  Rng rng(DeriveSeed(spec.seed, 0));
  Eigen::MatrixXd fields(n, modes);
  for (Index j = 0; j < modes; ++j) {
    Eigen::VectorXd field = Eigen::VectorXd::Zero(n);
    for (int bump = 0; bump < 4; ++bump) {
      const double cx = rng.Uniform();
      const double cy = rng.Uniform();
      const double width = 0.08 + 0.22 * rng.Uniform();
      const double amplitude = rng.Normal();
      for (Index gx = 0; gx < spec.width; ++gx) {
        for (Index gy = 0; gy < spec.height; ++gy) {
          const double dx = (static_cast<double>(gx) + 0.5) / static_cast<double>(spec.width) - cx;
          const double dy = (static_cast<double>(gy) + 0.5) / static_cast<double>(spec.height) - cy;
          field(gx * spec.height + gy) +=
              amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * width * width));
        }
      }
    }
    fields.col(j) = field;
  }
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(fields);
  const Eigen::MatrixXd basis = qr.householderQ() * Eigen::MatrixXd::Identity(n, modes);

  Eigen::VectorXd scale(modes);
  for (Index j = 0; j < modes; ++j) scale(j) = spec.leading * std::pow(spec.decay, static_cast<double>(j));
  const Eigen::MatrixXd coefficients = GenLatent(modes, spec.m, DeriveSeed(spec.seed, 1));

  SnapshotData data;
  data.x = basis * scale.asDiagonal() * coefficients;
  if (spec.noise > 0.0) {
    Rng noise(DeriveSeed(spec.seed, 2));
    for (Index j = 0; j < spec.m; ++j) {
      for (Index i = 0; i < n; ++i) data.x(i, j) += spec.noise * noise.Normal();
    }
  }
  data.grid = Grid{spec.width, spec.height};
  return data;
}

}  // namespace sensel
