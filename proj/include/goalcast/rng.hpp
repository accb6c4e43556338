// Copyright 2026 The goalcast Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GOALCAST_RNG_HPP_
#define GOALCAST_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>

namespace goalcast {

// Purpose tags so that truth generation, parameter initialization and
// measurement noise consume independent streams: the same truth can be
// re-observed under different noise draws without disturbing anything else.
enum class RngPurpose : std::uint64_t {
  kGoals = 0x67,
  kInit = 0x69,
  kNoise = 0x6e,
  kMisc = 0x6d,
};

// Deterministic stream over mt19937_64. Gaussian draws use Box-Muller on
// explicitly constructed uniforms instead of std::normal_distribution, whose
// output is implementation-defined.
class RngStream {
 public:
  RngStream(std::uint64_t seed, RngPurpose purpose)
      : engine_(mix(seed, static_cast<std::uint64_t>(purpose))) {}

  // Uniform on [0, 1).
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so the log is finite.
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t tag) {
    // splitmix64 finalizer over the (seed, tag) pair
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace goalcast

#endif  // GOALCAST_RNG_HPP_
