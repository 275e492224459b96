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

#include "qmf/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qmf/error.hpp"
#include "qmf/kernel.hpp"

namespace qmf {
namespace {

constexpr Complex kMinusI{0.0, -1.0};

void require_dim(std::size_t got, const ModelSpec& spec, const char* what) {
  if (got != spec.d()) throw DimensionError(std::string(what) + ": dimension mismatch");
}

}  // namespace

std::string_view to_string(TrajectoryMode mode) {
  switch (mode) {
    case TrajectoryMode::kNormalizedPure: return "normalized-pure";
    case TrajectoryMode::kUnnormalizedPure: return "unnormalized-pure";
    case TrajectoryMode::kNormalizedDensity: return "normalized-density";
  }
  return "?";
}

std::string_view to_string(DiffusionVariant variant) {
  switch (variant) {
    case DiffusionVariant::kAlgorithm1: return "algorithm1";
    case DiffusionVariant::kHalvedExpectation: return "halved-expectation";
  }
  return "?";
}

TrajectoryMode parse_mode(std::string_view name) {
  for (auto mode : {TrajectoryMode::kNormalizedPure, TrajectoryMode::kUnnormalizedPure,
                    TrajectoryMode::kNormalizedDensity}) {
    if (to_string(mode) == name) return mode;
  }
  throw ConfigError("unknown trajectory mode '" + std::string(name) + "'");
}

DiffusionVariant parse_variant(std::string_view name) {
  for (auto variant : {DiffusionVariant::kAlgorithm1, DiffusionVariant::kHalvedExpectation}) {
    if (to_string(variant) == name) return variant;
  }
  throw ConfigError("unknown diffusion variant '" + std::string(name) + "'");
}

void SchemeConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("scheme.dt must be positive");
  if (!(horizon >= dt) || !std::isfinite(horizon)) throw ConfigError("scheme.T must be at least dt");
  if (record_stride == 0) throw ConfigError("scheme.record_stride must be positive");
}

PureState euler_step_normalized_pure(const PureState& psi, const ComplexMatrix& mean_field, const ModelSpec& spec,
                                     const SchemeConfig& scheme, double dw) {
  require_dim(psi.dim(), spec, "euler_step_normalized_pure");
  const ComplexVector& v = psi.amplitudes;
  const ComplexVector l_psi = spec.channel() * v;
  const ComplexVector n_psi = spec.channel_number() * v;
  const ComplexVector h_psi = (spec.hamiltonian() + mean_field) * v;
  const Complex mean_l = inner(v, l_psi);
  const Complex mean_n = inner(v, n_psi);
  const Complex shift = scheme.variant == DiffusionVariant::kAlgorithm1 ? mean_l : 0.5 * mean_l;

  const std::size_t d = v.size();
  PureState out{ComplexVector(d), true};
  for (std::size_t i = 0; i < d; ++i) {
    out.amplitudes[i] = v[i] + scheme.dt * (kMinusI * h_psi[i] - 0.5 * (n_psi[i] - mean_n * v[i])) +
                        dw * (l_psi[i] - shift * v[i]);
  }
  if (!out.amplitudes.is_finite()) throw std::domain_error("non-finite state vector");
  if (scheme.renormalize_each_step) {
    const double norm = out.amplitudes.norm();
    if (!(norm > 0.0)) throw std::domain_error("state vector collapsed to zero norm");
    out.amplitudes *= 1.0 / norm;
  }
  return out;
}

PureState euler_step_unnormalized_pure(const PureState& chi, const ComplexMatrix& mean_field, const ModelSpec& spec,
                                       const SchemeConfig& scheme, double dy) {
  require_dim(chi.dim(), spec, "euler_step_unnormalized_pure");
  const ComplexVector& v = chi.amplitudes;
  const ComplexVector l_chi = spec.channel() * v;
  const ComplexVector n_chi = spec.channel_number() * v;
  const ComplexVector h_chi = (spec.hamiltonian() + mean_field) * v;

  const std::size_t d = v.size();
  PureState out{ComplexVector(d), false};
  for (std::size_t i = 0; i < d; ++i) {
    out.amplitudes[i] = v[i] + scheme.dt * (kMinusI * h_chi[i] - 0.5 * n_chi[i]) + dy * l_chi[i];
  }
  if (!out.amplitudes.is_finite()) throw std::domain_error("non-finite state vector");
  return out;
}

ComplexMatrix euler_step_density(const ComplexMatrix& gamma, const ComplexMatrix& mean_field, const ModelSpec& spec,
                                 const SchemeConfig& scheme, double dw) {
  require_dim(gamma.dim(), spec, "euler_step_density");
  require_dim(mean_field.dim(), spec, "euler_step_density");
  // gamma is Hermitian, so gamma K^dagger = (K gamma)^dagger and gamma L^dagger
  // = (L gamma)^dagger with K = -i(H + A) - L^dagger L / 2. Three products.
  const std::size_t d = gamma.dim();
  const Complex* g = gamma.entries().data();
  const Complex* h = spec.hamiltonian().entries().data();
  const Complex* a = mean_field.entries().data();
  const Complex* n = spec.channel_number().entries().data();
  const Complex* l = spec.channel().entries().data();

  ComplexMatrix k_gamma(d);
  ComplexMatrix l_gamma(d);
  Complex* kg = k_gamma.entries().data();
  Complex* lg = l_gamma.entries().data();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      Complex sk{};
      Complex sl{};
      for (std::size_t m = 0; m < d; ++m) {
        const std::size_t im = i * d + m;
        const Complex kim = kMinusI * (h[im] + a[im]) - 0.5 * n[im];
        sk += kim * g[m * d + j];
        sl += l[im] * g[m * d + j];
      }
      kg[i * d + j] = sk;
      lg[i * d + j] = sl;
    }
  // tr((L + L^dagger) gamma) = 2 Re tr(L gamma)
  Complex tr_lg{};
  for (std::size_t i = 0; i < d; ++i) tr_lg += lg[i * d + i];
  const double rate = 2.0 * tr_lg.real();

  ComplexMatrix next(d);
  Complex* out = next.entries().data();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      Complex jump{};  // (L gamma L^dagger)_{ij}
      for (std::size_t m = 0; m < d; ++m) jump += lg[i * d + m] * std::conj(l[j * d + m]);
      const Complex drift = kg[i * d + j] + std::conj(kg[j * d + i]) + jump;
      const Complex diffusion = lg[i * d + j] + std::conj(lg[j * d + i]) - rate * g[i * d + j];
      out[i * d + j] = g[i * d + j] + scheme.dt * drift + dw * diffusion;
    }
  // Hermitize in place; the trace is accumulated on the way.
  double tr = 0.0;
  bool finite = true;
  for (std::size_t i = 0; i < d; ++i) {
    out[i * d + i] = out[i * d + i].real();
    tr += out[i * d + i].real();
    for (std::size_t j = i + 1; j < d; ++j) {
      const Complex avg = 0.5 * (out[i * d + j] + std::conj(out[j * d + i]));
      out[i * d + j] = avg;
      out[j * d + i] = std::conj(avg);
      finite = finite && std::isfinite(avg.real()) && std::isfinite(avg.imag());
    }
  }
  if (!finite || !std::isfinite(tr)) throw std::domain_error("non-finite density matrix");
  if (scheme.renormalize_each_step) {
    if (std::abs(tr) < 1e-9) throw std::domain_error("density matrix trace underflow");
    const double inv = 1.0 / tr;
    for (std::size_t i = 0; i < d * d; ++i) out[i] *= inv;
  }
  return next;
}

ParticleEnsemble::ParticleEnsemble(ModelSpec spec, SchemeConfig scheme, std::size_t particles, std::uint64_t seed,
                                   std::uint64_t stream_offset)
    : spec_(std::move(spec)), scheme_(scheme), size_(particles), seed_(seed), stream_offset_(stream_offset) {
  scheme_.validate();
  if (particles == 0) throw ConfigError("particle count must be at least 1");
  if (scheme_.mode == TrajectoryMode::kNormalizedDensity) {
    densities_.assign(particles, spec_.initial_density());
  } else {
    PureState initial = spec_.initial_vector();
    initial.normalized = scheme_.mode == TrajectoryMode::kNormalizedPure;
    vectors_.assign(particles, initial);
  }
}

ComplexMatrix ParticleEnsemble::particle_density(std::size_t l) const {
  if (scheme_.mode == TrajectoryMode::kNormalizedDensity) return densities_.at(l);
  return density_from_pure(vectors_.at(l));
}

ComplexMatrix ParticleEnsemble::empirical_state() const {
  if (scheme_.mode == TrajectoryMode::kNormalizedDensity) return qmf::empirical_state(std::span(densities_));
  return qmf::empirical_state(std::span(vectors_));
}

void ParticleEnsemble::advance(const ComplexMatrix& mean_field) {
  const auto count = static_cast<std::ptrdiff_t>(size_);
  std::ptrdiff_t failed = count;
  std::string failure;

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto l = static_cast<std::size_t>(i);
    const NoiseStream noise(seed_, stream_offset_ + l);
    const double dw = noise.increment(step_, scheme_.dt);
    try {
      switch (scheme_.mode) {
        case TrajectoryMode::kNormalizedPure:
          vectors_[l] = euler_step_normalized_pure(vectors_[l], mean_field, spec_, scheme_, dw);
          break;
        case TrajectoryMode::kUnnormalizedPure:
          vectors_[l] = euler_step_unnormalized_pure(vectors_[l], mean_field, spec_, scheme_, dw);
          break;
        case TrajectoryMode::kNormalizedDensity:
          densities_[l] = euler_step_density(densities_[l], mean_field, spec_, scheme_, dw);
          break;
      }
    } catch (const std::exception& e) {
#pragma omp critical(qmf_particle_failure)
      if (i < failed) {
        failed = i;
        failure = e.what();
      }
    }
  }

  if (failed < count) {
    throw NumericalError("particle " + std::to_string(failed) + ": " + failure, step_ + 1);
  }
  ++step_;
}

void step_ensemble(ParticleEnsemble& ensemble) {
  ensemble.advance(apply_kernel(ensemble.spec().kernel(), ensemble.empirical_state()));
}

RecordRow make_row(std::size_t step, double time, const ComplexMatrix& state) {
  RecordRow row;
  row.step = step;
  row.time = time;
  row.state = state;
  row.trace_re = trace(state).real();
  row.purity = purity(state);
  if (state.dim() == 2) row.bloch = bloch_vector(state);
  return row;
}

TrajectoryRecord simulate(const ModelSpec& spec, const SchemeConfig& scheme, std::size_t particles,
                          std::uint64_t seed, const EnsembleObserver& observer, std::uint64_t stream_offset) {
  ParticleEnsemble ensemble(spec, scheme, particles, seed, stream_offset);
  const std::size_t steps = scheme.steps();
  TrajectoryRecord record;

  auto observe = [&] {
    const ComplexMatrix state = ensemble.empirical_state();
    const std::size_t k = ensemble.step_index();
    auto& checks = record.checks;
    checks.max_trace_error = std::max(checks.max_trace_error, std::abs(trace(state) - 1.0));
    checks.max_hermiticity = std::max(checks.max_hermiticity, hermiticity_violation(state));
    if (scheme.mode == TrajectoryMode::kNormalizedPure) {
      for (const auto& psi : ensemble.vectors()) {
        checks.max_norm_error = std::max(checks.max_norm_error, std::abs(psi.amplitudes.norm() - 1.0));
      }
    }
    if (k % scheme.record_stride == 0 || k == steps) {
      checks.min_eigenvalue = std::min(checks.min_eigenvalue, min_eigenvalue(state));
      record.rows.push_back(make_row(k, ensemble.time(), state));
    }
    if (observer) observer(ensemble);
  };

  try {
    observe();
    for (std::size_t k = 0; k < steps; ++k) {
      step_ensemble(ensemble);
      observe();
    }
  } catch (const NumericalError& e) {
    record.failure = RunFailure{e.step(), e.what()};
  }
  return record;
}

TimeSeries simulate_mckean_iid(const ModelSpec& spec, const SchemeConfig& scheme, std::size_t copies,
                               std::uint64_t seed, const TimeSeries& reference) {
  const std::size_t steps = scheme.steps();
  if (reference.size() < steps + 1) throw ConfigError("reference series is shorter than the simulation grid");
  for (std::size_t k = 0; k <= steps; ++k) {
    if (reference.steps[k] != k) throw ConfigError("reference series must be recorded at every step");
  }

  ParticleEnsemble ensemble(spec, scheme, copies, seed);
  TimeSeries out;
  auto record = [&] {
    out.steps.push_back(ensemble.step_index());
    out.times.push_back(ensemble.time());
    out.states.push_back(ensemble.empirical_state());
  };
  record();
  for (std::size_t k = 0; k < steps; ++k) {
    ensemble.advance(apply_kernel(spec.kernel(), reference.states[k]));
    if (ensemble.step_index() % scheme.record_stride == 0 || ensemble.step_index() == steps) record();
  }
  return out;
}

}  // namespace qmf
