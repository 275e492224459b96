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

// Shared helpers for the test binaries: seeded random operators and the
// shipped qubit model.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qmf/config.hpp"
#include "qmf/generators.hpp"
#include "qmf/linalg.hpp"

namespace qmf::test {

inline std::string source_path(const std::string& relative) { return std::string(QMF_SOURCE_DIR) + "/" + relative; }

inline Complex random_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return {g(rng), g(rng)};
}

inline ComplexMatrix random_matrix(std::size_t d, std::mt19937_64& rng) {
  ComplexMatrix m(d);
  for (auto& z : m.entries()) z = random_complex(rng);
  return m;
}

inline ComplexMatrix random_hermitian(std::size_t d, std::mt19937_64& rng) {
  ComplexMatrix m(d);
  for (std::size_t i = 0; i < d; ++i) {
    m(i, i) = random_complex(rng).real();
    for (std::size_t j = i + 1; j < d; ++j) {
      m(i, j) = random_complex(rng);
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

inline ComplexVector random_vector(std::size_t d, std::mt19937_64& rng, bool normalize = true) {
  ComplexVector v(d);
  double n2 = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    v[i] = random_complex(rng);
    n2 += std::norm(v[i]);
  }
  if (normalize) v *= 1.0 / std::sqrt(n2);
  return v;
}

/// Random density matrix G G^dagger / tr.
inline ComplexMatrix random_density(std::size_t d, std::mt19937_64& rng) {
  const ComplexMatrix g = random_matrix(d, rng);
  ComplexMatrix rho(d);
  double tr = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      Complex s{};
      for (std::size_t k = 0; k < d; ++k) s += g(i, k) * std::conj(g(j, k));
      rho(i, j) = s;
    }
  for (std::size_t i = 0; i < d; ++i) tr += rho(i, i).real();
  return rho * Complex(1.0 / tr);
}

/// Real kernel with exchange symmetry and a symmetric d^2 x d^2 matrix. Together
/// with self-adjointness, mapping Hermitian states to Hermitian operators forces
/// real entries, so this is the general admissible kernel.
inline ComplexMatrix random_symmetric_kernel(std::size_t d, std::mt19937_64& rng) {
  const std::size_t n = d * d;
  std::normal_distribution<double> g;
  ComplexMatrix raw(n);
  for (auto& z : raw.entries()) z = g(rng);
  ComplexMatrix a(n);
  auto swap_index = [d](std::size_t idx) { return (idx % d) * d + idx / d; };
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      a(p, q) = 0.25 * (raw(p, q) + raw(swap_index(p), swap_index(q)) + raw(q, p) + raw(swap_index(q), swap_index(p)));
    }
  return a;
}

inline double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double out = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) out = std::max(out, std::abs(a.entries()[i] - b.entries()[i]));
  return out;
}

inline SimulationConfig qubit_example() { return load_config(source_path("configs/qubit_example.json")); }

}  // namespace qmf::test
