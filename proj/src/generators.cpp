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

#include "qmf/generators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qmf/error.hpp"

namespace qmf {
namespace {

constexpr Complex kMinusI{0.0, -1.0};

std::optional<PureState> dominant_vector_if_pure(const ComplexMatrix& rho, double tolerance) {
  const auto n = static_cast<Eigen::Index>(rho.dim());
  Eigen::MatrixXcd dense(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) dense(i, j) = rho(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense);
  const auto& values = solver.eigenvalues();
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (std::abs(values(i)) > tolerance) return std::nullopt;
  }
  const Eigen::VectorXcd v = solver.eigenvectors().col(n - 1);
  // Fix the global phase: largest component real and positive.
  Eigen::Index pivot = 0;
  v.cwiseAbs().maxCoeff(&pivot);
  const Complex phase = std::conj(v(pivot)) / std::abs(v(pivot));
  PureState psi{ComplexVector(rho.dim()), true};
  for (Eigen::Index i = 0; i < n; ++i) psi.amplitudes[static_cast<std::size_t>(i)] = v(i) * phase;
  psi.amplitudes *= 1.0 / psi.amplitudes.norm();
  return psi;
}

void require_finite(const ComplexMatrix& m, std::size_t step) {
  if (!m.is_finite()) throw NumericalError("non-finite state", step);
}

}  // namespace

ModelSpec::ModelSpec(HermitianOperator hamiltonian, ComplexMatrix channel, InteractionKernel kernel,
                     InitialState initial)
    : hamiltonian_(std::move(hamiltonian)),
      channel_(std::move(channel)),
      kernel_(std::move(kernel)),
      initial_(std::move(initial)) {
  const std::size_t d = hamiltonian_.dim();
  if (d == 0) throw ConfigError("model dimension must be positive");
  if (channel_.dim() != d) throw ConfigError("channel L has dimension " + std::to_string(channel_.dim()) +
                                            ", expected " + std::to_string(d));
  if (kernel_.d() != d) throw ConfigError("kernel acts on dimension " + std::to_string(kernel_.d()) +
                                          ", expected " + std::to_string(d));
  if (!hamiltonian_.matrix().is_finite() || !channel_.is_finite() || !kernel_.matrix().is_finite()) {
    throw ConfigError("model operators contain non-finite entries");
  }
  channel_dagger_ = dagger(channel_);
  channel_number_ = channel_dagger_ * channel_;

  if (const auto* psi = std::get_if<PureState>(&initial_)) {
    if (psi->dim() != d) throw ConfigError("psi0 has the wrong dimension");
    if (!psi->amplitudes.is_finite()) throw ConfigError("psi0 contains non-finite entries");
    const double norm = psi->amplitudes.norm();
    if (std::abs(norm - 1.0) > 1e-10) {
      throw ConfigError("psi0 is not normalized: norm = " + std::to_string(norm));
    }
    PureState normalized = *psi;
    normalized.amplitudes *= 1.0 / norm;
    normalized.normalized = true;
    initial_density_ = density_from_pure(normalized);
    initial_vector_ = normalized;
  } else {
    const auto& rho = std::get<ComplexMatrix>(initial_);
    if (rho.dim() != d) throw ConfigError("rho0 has the wrong dimension");
    if (!rho.is_finite()) throw ConfigError("rho0 contains non-finite entries");
    const double herm = hermiticity_violation(rho);
    if (herm > kDefaultTolerance) {
      throw ConfigError("rho0 is not Hermitian: max violation " + std::to_string(herm));
    }
    const double trace_error = std::abs(trace(rho) - 1.0);
    if (trace_error > kDefaultTolerance) {
      throw ConfigError("rho0 trace differs from 1 by " + std::to_string(trace_error));
    }
    const double lowest = min_eigenvalue(rho);
    if (lowest < -1e-10) throw ConfigError("rho0 is not positive: min eigenvalue " + std::to_string(lowest));
    initial_density_ = rho;
    initial_vector_ = dominant_vector_if_pure(rho, 1e-10);
  }
}

const PureState& ModelSpec::initial_vector() const {
  if (!initial_vector_) throw ConfigError("pure-state mode requires psi0 or a rank-1 rho0");
  return *initial_vector_;
}

ModelSpec ModelSpec::with_kernel(InteractionKernel kernel) const {
  return ModelSpec(hamiltonian_, channel_, std::move(kernel), initial_);
}

ComplexMatrix dissipator(const ModelSpec& spec, const ComplexMatrix& rho) {
  ComplexMatrix out = spec.channel() * rho * spec.channel_dagger();
  ComplexMatrix anti = anticommutator(spec.channel_number(), rho);
  anti *= 0.5;
  out -= anti;
  return out;
}

ComplexMatrix meanfield_lindblad_rhs(const ComplexMatrix& m, const ModelSpec& spec) {
  if (m.dim() != spec.d()) throw DimensionError("meanfield_lindblad_rhs: dimension mismatch");
  const ComplexMatrix effective = spec.hamiltonian() + apply_kernel(spec.kernel(), m);
  ComplexMatrix out = kMinusI * commutator(effective, m);
  out += dissipator(spec, m);
  return out;
}

NBodyGenerator::NBodyGenerator(const ModelSpec& spec, std::size_t particles) : particles_(particles) {
  if (particles == 0) throw ConfigError("N-body solver needs at least one particle");
  std::size_t total = 1;
  for (std::size_t i = 0; i < particles; ++i) {
    total *= spec.d();
    if (total > kMaxNBodyDimension) {
      throw ConfigError("N-body dimension d^N exceeds " + std::to_string(kMaxNBodyDimension) + " (d = " +
                        std::to_string(spec.d()) + ", N = " + std::to_string(particles) + ")");
    }
  }
  total_hamiltonian_ = ComplexMatrix(total);
  for (std::size_t l = 1; l <= particles; ++l) {
    total_hamiltonian_ += embed_single(spec.hamiltonian(), l, particles);
    channels_.push_back(embed_single(spec.channel(), l, particles));
    channels_dagger_.push_back(dagger(channels_.back()));
    channel_numbers_.push_back(channels_dagger_.back() * channels_.back());
  }
  if (!spec.kernel().is_zero()) {
    const double weight = 1.0 / static_cast<double>(particles);
    for (std::size_t l = 2; l <= particles; ++l)
      for (std::size_t lp = 1; lp < l; ++lp) {
        total_hamiltonian_ += weight * embed_pair(spec.kernel().matrix(), lp, l, particles);
      }
  }
}

ComplexMatrix NBodyGenerator::operator()(const ComplexMatrix& rho) const {
  if (rho.dim() != dim()) throw DimensionError("nbody_lindblad_rhs: dimension mismatch");
  ComplexMatrix out = kMinusI * commutator(total_hamiltonian_, rho);
  for (std::size_t l = 0; l < particles_; ++l) {
    out += channels_[l] * rho * channels_dagger_[l];
    ComplexMatrix anti = anticommutator(channel_numbers_[l], rho);
    anti *= 0.5;
    out -= anti;
  }
  return out;
}

ComplexMatrix nbody_lindblad_rhs(const ComplexMatrix& rho, const ModelSpec& spec, std::size_t particles) {
  return NBodyGenerator(spec, particles)(rho);
}

std::size_t step_count(double horizon, double dt) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  if (!(horizon >= 0.0)) throw ConfigError("horizon must be nonnegative");
  const double ratio = horizon / dt;
  return static_cast<std::size_t>(std::ceil(ratio - 1e-9));
}

TimeSeries rk4_solve(const MatrixRhs& rhs, const ComplexMatrix& initial, double horizon, double dt,
                     std::size_t stride, const StepObserver& observer) {
  const std::size_t steps = step_count(horizon, dt);
  if (steps > 10'000'000) throw ConfigError("rk4_solve: more than 1e7 steps requested");
  if (stride == 0) throw ConfigError("record stride must be positive");
  require_finite(initial, 0);

  TimeSeries series;
  auto record = [&](std::size_t k, const ComplexMatrix& x) {
    series.steps.push_back(k);
    series.times.push_back(static_cast<double>(k) * dt);
    series.states.push_back(x);
  };

  ComplexMatrix x = initial;
  record(0, x);
  if (observer) observer(0, x);
  const Complex half_dt = 0.5 * dt;
  const Complex sixth_dt = dt / 6.0;
  for (std::size_t k = 1; k <= steps; ++k) {
    const ComplexMatrix k1 = rhs(x);
    const ComplexMatrix k2 = rhs(x + half_dt * k1);
    const ComplexMatrix k3 = rhs(x + half_dt * k2);
    const ComplexMatrix k4 = rhs(x + Complex{dt} * k3);
    ComplexMatrix incr = k2 + k3;
    incr *= 2.0;
    incr += k1;
    incr += k4;
    x += sixth_dt * incr;
    require_finite(x, k);
    if (observer) observer(k, x);
    if (k % stride == 0 || k == steps) record(k, x);
  }
  return series;
}

void PhysicalityReport::check(const ComplexMatrix& m, std::size_t step, double time,
                              const PhysicalityTolerances& tol) {
  const double trace_error = std::abs(trace(m) - 1.0);
  const double herm = hermiticity_violation(m);
  const double lowest = qmf::min_eigenvalue(m);
  max_trace_error = std::max(max_trace_error, trace_error);
  max_hermiticity = std::max(max_hermiticity, herm);
  min_eigenvalue = std::min(min_eigenvalue, lowest);

  auto describe = [&](const char* what, double value) {
    std::ostringstream os;
    os.precision(6);
    os << what << " " << value << " at t = " << time;
    return os.str();
  };
  if (trace_error > tol.trace) throw NumericalError(describe("trace error", trace_error), step);
  if (herm > tol.hermiticity) throw NumericalError(describe("Hermiticity violation", herm), step);
  if (lowest < tol.eigenvalue_abort) throw NumericalError(describe("negative eigenvalue", lowest), step);
  if (lowest < tol.eigenvalue_warn) warnings.push_back(describe("negative eigenvalue", lowest));
}

ReferenceSolution solve_meanfield_reference(const ModelSpec& spec, double horizon, double dt, std::size_t stride,
                                            const PhysicalityTolerances& tol) {
  ReferenceSolution out;
  auto rhs = [&spec](const ComplexMatrix& m) { return meanfield_lindblad_rhs(m, spec); };
  auto check = [&](std::size_t k, const ComplexMatrix& m) {
    out.checks.check(m, k, static_cast<double>(k) * dt, tol);
  };
  out.series = rk4_solve(rhs, spec.initial_density(), horizon, dt, stride, check);
  return out;
}

ReferenceSolution solve_nbody_reference(const ModelSpec& spec, std::size_t particles, double horizon, double dt,
                                        std::size_t stride, const PhysicalityTolerances& tol) {
  const NBodyGenerator generator(spec, particles);
  ComplexMatrix initial = spec.initial_density();
  for (std::size_t l = 1; l < particles; ++l) initial = kron(initial, spec.initial_density());

  ReferenceSolution out;
  auto rhs = [&generator](const ComplexMatrix& rho) { return generator(rho); };
  auto check = [&](std::size_t k, const ComplexMatrix& rho) {
    out.checks.check(rho, k, static_cast<double>(k) * dt, tol);
  };
  out.series = rk4_solve(rhs, initial, horizon, dt, stride, check);
  return out;
}

}  // namespace qmf
