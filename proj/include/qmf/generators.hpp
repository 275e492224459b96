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

// Deterministic right-hand sides: the nonlinear mean-field Lindblad equation
// and the exact N-body Lindblad equation, with a fixed-step RK4 integrator.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qmf/kernel.hpp"
#include "qmf/linalg.hpp"

namespace qmf {

using InitialState = std::variant<PureState, ComplexMatrix>;

/// Single-particle model: free Hamiltonian H, channel L, kernel a, initial state.
class ModelSpec {
 public:
  /// Validates dimensions and the initial state (rho0 Hermitian, PSD within
  /// -1e-10, unit trace within 1e-12; psi0 unit norm within 1e-10). Throws ConfigError.
  ModelSpec(HermitianOperator hamiltonian, ComplexMatrix channel, InteractionKernel kernel, InitialState initial);

  std::size_t d() const noexcept { return hamiltonian_.dim(); }
  const ComplexMatrix& hamiltonian() const noexcept { return hamiltonian_.matrix(); }
  const ComplexMatrix& channel() const noexcept { return channel_; }
  const ComplexMatrix& channel_dagger() const noexcept { return channel_dagger_; }
  /// L^dagger L
  const ComplexMatrix& channel_number() const noexcept { return channel_number_; }
  const InteractionKernel& kernel() const noexcept { return kernel_; }

  const ComplexMatrix& initial_density() const noexcept { return initial_density_; }
  /// psi0, or the dominant eigenvector of a rank-1 rho0 (within 1e-10).
  /// Throws ConfigError when the initial state is mixed.
  const PureState& initial_vector() const;
  bool has_pure_initial() const noexcept { return initial_vector_.has_value(); }

  ModelSpec with_kernel(InteractionKernel kernel) const;

 private:
  HermitianOperator hamiltonian_;
  ComplexMatrix channel_;
  ComplexMatrix channel_dagger_;
  ComplexMatrix channel_number_;
  InteractionKernel kernel_;
  InitialState initial_;
  ComplexMatrix initial_density_;
  std::optional<PureState> initial_vector_;
};

/// L rho L^dagger - 1/2 {L^dagger L, rho}.
ComplexMatrix dissipator(const ModelSpec& spec, const ComplexMatrix& rho);

/// -i[H + A^m, m] + L m L^dagger - 1/2 {L^dagger L, m}.
ComplexMatrix meanfield_lindblad_rhs(const ComplexMatrix& m, const ModelSpec& spec);

inline constexpr std::size_t kMaxNBodyDimension = 64;

/// Generator of the N-body Lindblad equation with
/// H^N = sum_l H_l + (1/N) sum_{l > l'} A_{l'l}; operators are assembled once.
class NBodyGenerator {
 public:
  /// Throws ConfigError when d^N exceeds kMaxNBodyDimension.
  NBodyGenerator(const ModelSpec& spec, std::size_t particles);

  std::size_t particles() const noexcept { return particles_; }
  std::size_t dim() const noexcept { return total_hamiltonian_.dim(); }
  const ComplexMatrix& total_hamiltonian() const noexcept { return total_hamiltonian_; }

  ComplexMatrix operator()(const ComplexMatrix& rho) const;

 private:
  std::size_t particles_;
  ComplexMatrix total_hamiltonian_;
  std::vector<ComplexMatrix> channels_;
  std::vector<ComplexMatrix> channels_dagger_;
  std::vector<ComplexMatrix> channel_numbers_;
};

ComplexMatrix nbody_lindblad_rhs(const ComplexMatrix& rho, const ModelSpec& spec, std::size_t particles);

/// Number of steps to cover [0, T] with step dt: ceil(T/dt), ignoring
/// floating-point excess below 1e-9 steps.
std::size_t step_count(double horizon, double dt);

struct TimeSeries {
  std::vector<std::size_t> steps;
  std::vector<double> times;
  std::vector<ComplexMatrix> states;

  std::size_t size() const noexcept { return states.size(); }
};

using MatrixRhs = std::function<ComplexMatrix(const ComplexMatrix&)>;
/// Called after every step with (step index, state); may throw to abort.
using StepObserver = std::function<void(std::size_t, const ComplexMatrix&)>;

/// Classical RK4. Records step 0, every `stride`-th step and the final step.
/// Throws NumericalError at the first non-finite state.
TimeSeries rk4_solve(const MatrixRhs& rhs, const ComplexMatrix& initial, double horizon, double dt,
                     std::size_t stride = 1, const StepObserver& observer = {});

struct PhysicalityTolerances {
  double trace = 1e-8;
  double hermiticity = 1e-10;
  double eigenvalue_warn = -1e-6;
  double eigenvalue_abort = -1e-4;
};

struct PhysicalityReport {
  double max_trace_error = 0.0;
  double max_hermiticity = 0.0;
  double min_eigenvalue = 1.0;
  std::vector<std::string> warnings;

  void check(const ComplexMatrix& m, std::size_t step, double time, const PhysicalityTolerances& tol);
};

struct ReferenceSolution {
  TimeSeries series;
  PhysicalityReport checks;
};

/// RK4 on the mean-field equation from the spec's initial density; every step is
/// checked for unit trace, Hermiticity and positivity.
ReferenceSolution solve_meanfield_reference(const ModelSpec& spec, double horizon, double dt, std::size_t stride = 1,
                                            const PhysicalityTolerances& tol = {});

/// RK4 on the N-body equation from rho0^{(x)N}.
ReferenceSolution solve_nbody_reference(const ModelSpec& spec, std::size_t particles, double horizon, double dt,
                                        std::size_t stride = 1, const PhysicalityTolerances& tol = {});

}  // namespace qmf
