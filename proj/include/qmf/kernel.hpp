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

// Pairwise interaction kernel a(x,y;x',y') stored as a d^2 x d^2 matrix with
// a[idx(x,y), idx(x',y')], idx(x,y) = (x-1) d + (y-1), and the mean-field map
// rho -> A^rho(x,y) = sum_{x',y'} a(x,y;x',y') conj(rho(x',y')).

#include <cstdint>
#include <span>
#include <string>

#include "qmf/linalg.hpp"

namespace qmf {

class InteractionKernel {
 public:
  /// `matrix` must be d^2 x d^2; throws DimensionError otherwise. No symmetry
  /// check happens here, see validate_kernel.
  explicit InteractionKernel(ComplexMatrix matrix);

  static InteractionKernel zero(std::size_t d);

  std::size_t d() const noexcept { return d_; }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }

  /// a(x,y;x',y') with 0-based arguments.
  const Complex& operator()(std::size_t x, std::size_t y, std::size_t xp, std::size_t yp) const noexcept {
    return matrix_(x * d_ + y, xp * d_ + yp);
  }

  bool is_zero() const noexcept { return is_zero_; }
  double hs_norm() const noexcept { return norm_; }

 private:
  std::size_t d_;
  ComplexMatrix matrix_;
  bool is_zero_;
  double norm_;
};

struct KernelValidation {
  double exchange_violation = 0.0;       // max |a(x,y;x',y') - a(y,x;y',x')|
  double self_adjoint_violation = 0.0;   // max |a(x,y;x',y') - conj(a(x',y';x,y))|
  double hermiticity_probe_violation = 0.0;  // max over probes of hermiticity_violation(A^rho)
  bool passed = false;

  std::string summary() const;
};

struct KernelTolerances {
  double symmetry = 1e-12;
  double probe = 1e-10;
  std::size_t probes = 8;
  std::uint64_t probe_seed = 0x5eedu;
};

KernelValidation validate_kernel(const InteractionKernel& kernel, const KernelTolerances& tol = {});

/// devec(a * vec_dagger(rho)).
ComplexMatrix apply_kernel(const InteractionKernel& kernel, const ComplexMatrix& rho);
/// The same map written as the explicit four-index sum.
ComplexMatrix apply_kernel_direct(const InteractionKernel& kernel, const ComplexMatrix& rho);

struct KernelBound {
  double lhs;  // ||A^rho||_2^2
  double rhs;  // ||rho||_2^2 ||a||_2^2
};

KernelBound kernel_bound_check(const InteractionKernel& kernel, const ComplexMatrix& rho);

/// A^{(1/N) sum_l |psi_l><psi_l|}; throws DimensionError on an empty ensemble.
ComplexMatrix empirical_mean_field(const InteractionKernel& kernel, std::span<const PureState> states);

/// (1/N) sum_l |psi_l><psi_l| with a fixed summation order.
ComplexMatrix empirical_state(std::span<const PureState> states);
ComplexMatrix empirical_state(std::span<const ComplexMatrix> states);

}  // namespace qmf
