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

// Euler-Maruyama steppers for the mean-field trajectory equations and the
// interacting particle system that approximates them.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qmf/generators.hpp"
#include "qmf/linalg.hpp"
#include "qmf/noise.hpp"

namespace qmf {

enum class TrajectoryMode {
  kNormalizedPure,    // psi_t, measure P
  kUnnormalizedPure,  // chi_t, measure Q
  kNormalizedDensity  // gamma_t, measure P
};

enum class DiffusionVariant {
  kAlgorithm1,         // (L - <L>) psi dW
  kHalvedExpectation,  // (L - <L>/2) psi dW
};

std::string_view to_string(TrajectoryMode mode);
std::string_view to_string(DiffusionVariant variant);
/// Throws ConfigError on unknown names.
TrajectoryMode parse_mode(std::string_view name);
DiffusionVariant parse_variant(std::string_view name);

struct SchemeConfig {
  TrajectoryMode mode = TrajectoryMode::kNormalizedPure;
  DiffusionVariant variant = DiffusionVariant::kAlgorithm1;
  bool renormalize_each_step = true;
  double dt = 1e-3;
  double horizon = 1.0;
  std::size_t record_stride = 1;

  /// dt > 0, horizon >= dt, stride >= 1; throws ConfigError.
  void validate() const;
  std::size_t steps() const { return step_count(horizon, dt); }
};

// Single-step updates. `mean_field` is the frozen A^{m_k}; `dw` is the Wiener
// increment (already scaled by sqrt(dt)). They throw std::domain_error when the
// result is non-finite or cannot be renormalized.

PureState euler_step_normalized_pure(const PureState& psi, const ComplexMatrix& mean_field, const ModelSpec& spec,
                                     const SchemeConfig& scheme, double dw);
PureState euler_step_unnormalized_pure(const PureState& chi, const ComplexMatrix& mean_field, const ModelSpec& spec,
                                       const SchemeConfig& scheme, double dy);
ComplexMatrix euler_step_density(const ComplexMatrix& gamma, const ComplexMatrix& mean_field, const ModelSpec& spec,
                                 const SchemeConfig& scheme, double dw);

/// N particles with per-particle noise streams. Particle l (0-based) draws its
/// increments from NoiseStream(seed, stream_offset + l).
class ParticleEnsemble {
 public:
  ParticleEnsemble(ModelSpec spec, SchemeConfig scheme, std::size_t particles, std::uint64_t seed,
                   std::uint64_t stream_offset = 0);

  std::size_t size() const noexcept { return size_; }
  std::size_t step_index() const noexcept { return step_; }
  double time() const noexcept { return static_cast<double>(step_) * scheme_.dt; }
  const ModelSpec& spec() const noexcept { return spec_; }
  const SchemeConfig& scheme() const noexcept { return scheme_; }
  std::uint64_t seed() const noexcept { return seed_; }

  /// Pure modes only.
  const std::vector<PureState>& vectors() const noexcept { return vectors_; }
  /// Density mode only.
  const std::vector<ComplexMatrix>& densities() const noexcept { return densities_; }

  ComplexMatrix particle_density(std::size_t l) const;
  /// (1/N) sum of particle densities; raw average in the unnormalized mode.
  ComplexMatrix empirical_state() const;

  /// Advances every particle one step under the given frozen mean-field
  /// operator. Throws NumericalError naming the lowest failing particle.
  void advance(const ComplexMatrix& mean_field);

 private:
  ModelSpec spec_;
  SchemeConfig scheme_;
  std::size_t size_;
  std::uint64_t seed_;
  std::uint64_t stream_offset_;
  std::size_t step_ = 0;
  std::vector<PureState> vectors_;
  std::vector<ComplexMatrix> densities_;
};

/// One step of the interacting system: A^{m_k} from the current empirical
/// state, shared by every particle.
void step_ensemble(ParticleEnsemble& ensemble);

struct RecordRow {
  std::size_t step = 0;
  double time = 0.0;
  ComplexMatrix state;
  double trace_re = 0.0;
  double purity = 0.0;
  std::optional<std::array<double, 3>> bloch;
};

RecordRow make_row(std::size_t step, double time, const ComplexMatrix& state);

struct RunFailure {
  std::size_t step;
  std::string message;
};

struct RunChecks {
  double max_norm_error = 0.0;      // normalized-pure: max | ||psi|| - 1 |
  double max_trace_error = 0.0;     // | tr(m_hat) - 1 |
  double max_hermiticity = 0.0;     // of m_hat
  double min_eigenvalue = 1.0;      // of m_hat
};

struct TrajectoryRecord {
  std::vector<RecordRow> rows;
  RunChecks checks;
  std::optional<RunFailure> failure;
};

/// Called after every step (and once at step 0) with the ensemble.
using EnsembleObserver = std::function<void(const ParticleEnsemble&)>;

/// Runs the interacting system for ceil(T/dt) steps, recording the empirical
/// state every `record_stride` steps. Numerical failures are captured in
/// `failure` instead of thrown.
TrajectoryRecord simulate(const ModelSpec& spec, const SchemeConfig& scheme, std::size_t particles,
                          std::uint64_t seed, const EnsembleObserver& observer = {},
                          std::uint64_t stream_offset = 0);

/// M independent McKean-Vlasov copies driven by A^{m_ref(t_k)}. `reference`
/// must hold every step 0..steps of the same grid. Returns the mean state
/// every `record_stride` steps.
TimeSeries simulate_mckean_iid(const ModelSpec& spec, const SchemeConfig& scheme, std::size_t copies,
                               std::uint64_t seed, const TimeSeries& reference);

}  // namespace qmf
