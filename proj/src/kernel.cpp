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

#include "qmf/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "qmf/error.hpp"

namespace qmf {
namespace {

std::size_t kernel_single_dim(const ComplexMatrix& m) {
  const auto d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(m.dim()))));
  if (d == 0 || d * d != m.dim()) {
    throw DimensionError("kernel matrix dimension " + std::to_string(m.dim()) + " is not d^2");
  }
  return d;
}

ComplexMatrix random_hermitian(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  ComplexMatrix m(d);
  for (std::size_t i = 0; i < d; ++i) {
    m(i, i) = normal(rng);
    for (std::size_t j = i + 1; j < d; ++j) {
      m(i, j) = Complex{normal(rng), normal(rng)};
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

}  // namespace

InteractionKernel::InteractionKernel(ComplexMatrix matrix)
    : d_(kernel_single_dim(matrix)), matrix_(std::move(matrix)) {
  const auto e = matrix_.entries();
  is_zero_ = std::all_of(e.begin(), e.end(), [](const Complex& z) { return z == Complex{}; });
  norm_ = qmf::hs_norm(matrix_);
}

InteractionKernel InteractionKernel::zero(std::size_t d) { return InteractionKernel(ComplexMatrix(d * d)); }

std::string KernelValidation::summary() const {
  std::ostringstream os;
  os << (passed ? "kernel ok" : "kernel invalid") << ": exchange " << exchange_violation << ", self-adjoint "
     << self_adjoint_violation << ", hermiticity probe " << hermiticity_probe_violation;
  return os.str();
}

KernelValidation validate_kernel(const InteractionKernel& kernel, const KernelTolerances& tol) {
  KernelValidation report;
  const std::size_t d = kernel.d();
  for (std::size_t x = 0; x < d; ++x)
    for (std::size_t y = 0; y < d; ++y)
      for (std::size_t xp = 0; xp < d; ++xp)
        for (std::size_t yp = 0; yp < d; ++yp) {
          const Complex v = kernel(x, y, xp, yp);
          report.exchange_violation = std::max(report.exchange_violation, std::abs(v - kernel(y, x, yp, xp)));
          report.self_adjoint_violation =
              std::max(report.self_adjoint_violation, std::abs(v - std::conj(kernel(xp, yp, x, y))));
        }

  std::mt19937_64 rng(tol.probe_seed);
  for (std::size_t i = 0; i < tol.probes; ++i) {
    const ComplexMatrix rho = random_hermitian(d, rng);
    report.hermiticity_probe_violation =
        std::max(report.hermiticity_probe_violation, hermiticity_violation(apply_kernel(kernel, rho)));
  }

  report.passed = report.exchange_violation <= tol.symmetry && report.self_adjoint_violation <= tol.symmetry &&
                  report.hermiticity_probe_violation <= tol.probe;
  return report;
}

ComplexMatrix apply_kernel(const InteractionKernel& kernel, const ComplexMatrix& rho) {
  if (rho.dim() != kernel.d()) {
    throw DimensionError("apply_kernel: state dimension " + std::to_string(rho.dim()) + ", kernel expects " +
                         std::to_string(kernel.d()));
  }
  if (kernel.is_zero()) return ComplexMatrix(rho.dim());
  return devec(kernel.matrix() * vec_dagger(rho));
}

ComplexMatrix apply_kernel_direct(const InteractionKernel& kernel, const ComplexMatrix& rho) {
  const std::size_t d = kernel.d();
  if (rho.dim() != d) throw DimensionError("apply_kernel_direct: dimension mismatch");
  ComplexMatrix out(d);
  for (std::size_t x = 0; x < d; ++x)
    for (std::size_t y = 0; y < d; ++y) {
      Complex sum{};
      for (std::size_t xp = 0; xp < d; ++xp)
        for (std::size_t yp = 0; yp < d; ++yp) sum += kernel(x, y, xp, yp) * std::conj(rho(xp, yp));
      out(x, y) = sum;
    }
  return out;
}

KernelBound kernel_bound_check(const InteractionKernel& kernel, const ComplexMatrix& rho) {
  const double a = hs_norm(apply_kernel(kernel, rho));
  const double r = hs_norm(rho);
  return {a * a, r * r * kernel.hs_norm() * kernel.hs_norm()};
}

ComplexMatrix empirical_state(std::span<const PureState> states) {
  if (states.empty()) throw DimensionError("empirical_state: empty ensemble");
  const std::size_t d = states.front().dim();
  ComplexMatrix sum(d);
  for (const auto& psi : states) {
    if (psi.dim() != d) throw DimensionError("empirical_state: mixed dimensions");
    const auto& a = psi.amplitudes;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) sum(i, j) += a[i] * std::conj(a[j]);
  }
  sum *= 1.0 / static_cast<double>(states.size());
  return sum;
}

ComplexMatrix empirical_state(std::span<const ComplexMatrix> states) {
  if (states.empty()) throw DimensionError("empirical_state: empty ensemble");
  ComplexMatrix sum(states.front().dim());
  for (const auto& g : states) sum += g;
  sum *= 1.0 / static_cast<double>(states.size());
  return sum;
}

ComplexMatrix empirical_mean_field(const InteractionKernel& kernel, std::span<const PureState> states) {
  return apply_kernel(kernel, empirical_state(states));
}

}  // namespace qmf
