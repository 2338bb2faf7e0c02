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

#ifndef SENSEL_RNG_H_
#define SENSEL_RNG_H_

// Reproducible random streams.
//
// Engine: std::mt19937_64 (its output sequence is fixed by the C++ standard).
// Uniform: u = ((x >> 11) + 1) * 2^-53, so u lies in (0, 1].
// Normal: Box-Muller on two uniforms u1, u2:
//   z0 = sqrt(-2 ln u1) cos(2 pi u2),  z1 = sqrt(-2 ln u1) sin(2 pi u2)
// returned in the order z0, z1. The std:: distributions are not used because
// their algorithms are implementation-defined.

#include <cstdint>
#include <random>

namespace sensel {

// splitmix64 finalizer over (seed, stream, substream); used to give every
// trial or fold its own independent engine.
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double Uniform() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  double Normal();

  // Uniform integer in [0, bound), by rejection on the top bits.
  std::uint64_t Below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace sensel

#endif  // SENSEL_RNG_H_
