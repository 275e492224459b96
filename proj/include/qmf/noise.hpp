// Copyright 2026 The qmf Authors
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

#pragma once

// Counter-based Gaussian noise: the increment for (seed, particle, step) is a
// pure function of the triple, so results never depend on evaluation order.

#include <array>
#include <cstdint>

namespace qmf {

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

class NoiseStream {
 public:
  NoiseStream(std::uint64_t seed, std::uint64_t particle) noexcept : seed_(seed), particle_(particle) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t particle() const noexcept { return particle_; }

  /// Standard normal draw attached to `step`.
  double normal(std::uint64_t step) const noexcept;
  /// Wiener increment sqrt(dt) * normal(step).
  double increment(std::uint64_t step, double dt) const noexcept;

 private:
  std::uint64_t seed_;
  std::uint64_t particle_;
};

}  // namespace qmf
