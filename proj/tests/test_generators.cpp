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

#include <doctest.h>

#include <cmath>
#include <random>

#include "qmf/error.hpp"
#include "qmf/generators.hpp"
#include "support.hpp"

using namespace qmf;
using qmf::test::max_diff;

namespace {

const Complex kI{0.0, 1.0};

InteractionKernel qubit_kernel() {
  const Complex diag[] = {1.0, 0.0, 0.0, 1.0};
  return InteractionKernel(ComplexMatrix::diagonal(diag));
}

ModelSpec make_spec(const ComplexMatrix& h, const ComplexMatrix& l, const InteractionKernel& k, InitialState init) {
  return ModelSpec(HermitianOperator(h), l, k, std::move(init));
}

ModelSpec free_qubit(const ComplexMatrix& h, const ComplexMatrix& l, InitialState init) {
  return make_spec(h, l, InteractionKernel::zero(2), std::move(init));
}

}  // namespace

TEST_CASE("model validation") {
  const ComplexMatrix z2(2);
  CHECK_NOTHROW(free_qubit(z2, z2, PureState{{0.0, 1.0}, true}));
  CHECK_THROWS_AS(free_qubit(z2, z2, PureState{{0.0, 2.0}, true}), ConfigError);
  CHECK_THROWS_AS(free_qubit(z2, z2, ComplexMatrix{{0.5, 0.1}, {0.0, 0.5}}), ConfigError);
  CHECK_THROWS_AS(free_qubit(z2, z2, ComplexMatrix{{0.6, 0.0}, {0.0, 0.6}}), ConfigError);
  CHECK_THROWS_AS(free_qubit(z2, z2, ComplexMatrix{{1.5, 0.0}, {0.0, -0.5}}), ConfigError);
  CHECK_THROWS(free_qubit(z2, ComplexMatrix(3), PureState{{0.0, 1.0}, true}));

  const ModelSpec mixed = free_qubit(z2, z2, Complex(0.5) * ComplexMatrix::identity(2));
  CHECK_FALSE(mixed.has_pure_initial());
  CHECK_THROWS_AS(mixed.initial_vector(), ConfigError);

  const ModelSpec rank_one = free_qubit(z2, z2, from_bloch(0.6, 0.0, 0.8));
  REQUIRE(rank_one.has_pure_initial());
  CHECK(max_diff(density_from_pure(rank_one.initial_vector()), from_bloch(0.6, 0.0, 0.8)) < 1e-12);
}

TEST_CASE("mean-field generator") {
  const ComplexMatrix z2(2);
  std::mt19937_64 rng(31);
  const ModelSpec trivial = free_qubit(z2, z2, PureState{{1.0, 0.0}, true});
  CHECK(meanfield_lindblad_rhs(test::random_density(2, rng), trivial) == ComplexMatrix(2));

  // Decay of the excited state diag(0,1) into diag(1,0): rhs = diag(1, -1).
  const ModelSpec decay = free_qubit(z2, pauli::lowering(), PureState{{0.0, 1.0}, true});
  const ComplexMatrix rhs = meanfield_lindblad_rhs(ComplexMatrix{{0, 0}, {0, 1}}, decay);
  CHECK(max_diff(rhs, ComplexMatrix{{1, 0}, {0, -1}}) == 0.0);

  const ModelSpec model = make_spec(test::random_hermitian(3, rng), test::random_matrix(3, rng),
                                    InteractionKernel(test::random_symmetric_kernel(3, rng)),
                                    PureState{test::random_vector(3, rng), true});
  for (int trial = 0; trial < 100; ++trial) {
    CHECK(std::abs(trace(meanfield_lindblad_rhs(test::random_hermitian(3, rng), model))) < 1e-12);
  }

  // Dense oracle: -i[H + A, m] + L m L^dagger - {L^dagger L, m} / 2.
  const ComplexMatrix m = test::random_density(3, rng);
  const ComplexMatrix eff = model.hamiltonian() + apply_kernel_direct(model.kernel(), m);
  const ComplexMatrix& l = model.channel();
  const ComplexMatrix ld = dagger(l);
  const ComplexMatrix oracle = Complex(0.0, -1.0) * (eff * m - m * eff) + l * m * ld -
                               Complex(0.5) * (ld * l * m + m * ld * l);
  CHECK(max_diff(meanfield_lindblad_rhs(m, model), oracle) < 1e-12);
}

TEST_CASE("N-body generator") {
  std::mt19937_64 rng(32);
  const ComplexMatrix h = test::random_hermitian(2, rng);
  const ComplexMatrix l = test::random_matrix(2, rng);
  const ModelSpec model = make_spec(h, l, qubit_kernel(), PureState{{0.0, 1.0}, true});
  const ModelSpec free_model = model.with_kernel(InteractionKernel::zero(2));

  const ComplexMatrix rho1 = test::random_density(2, rng);
  CHECK(max_diff(nbody_lindblad_rhs(rho1, model, 1), meanfield_lindblad_rhs(rho1, free_model)) < 1e-14);

  // With a = 0 the generator is the sum of embedded single-particle generators.
  const ComplexMatrix rho2 = test::random_density(4, rng);
  ComplexMatrix oracle(4);
  for (std::size_t site = 1; site <= 2; ++site) {
    const ComplexMatrix hs = embed_single(h, site, 2);
    const ComplexMatrix ls = embed_single(l, site, 2);
    const ComplexMatrix lsd = dagger(ls);
    oracle += Complex(0.0, -1.0) * (hs * rho2 - rho2 * hs) + ls * rho2 * lsd -
              Complex(0.5) * (lsd * ls * rho2 + rho2 * lsd * ls);
  }
  CHECK(max_diff(nbody_lindblad_rhs(rho2, free_model, 2), oracle) < 1e-13);
  CHECK(std::abs(trace(nbody_lindblad_rhs(test::random_hermitian(4, rng), model, 2))) < 1e-12);

  // Interaction: H^2 = H (x) 1 + 1 (x) H + a / 2.
  const NBodyGenerator gen(model, 2);
  const ComplexMatrix expected = embed_single(h, 1, 2) + embed_single(h, 2, 2) + Complex(0.5) * model.kernel().matrix();
  CHECK(max_diff(gen.total_hamiltonian(), expected) < 1e-15);
  CHECK_THROWS_AS(NBodyGenerator(model, 7), ConfigError);
}

TEST_CASE("step count") {
  CHECK(step_count(1.0, 1e-3) == 1000);
  CHECK(step_count(1.0, 2e-3) == 500);
  CHECK(step_count(0.3, 0.1) == 3);
  CHECK(step_count(1.0, 0.3) == 4);
}

TEST_CASE("RK4") {
  const ComplexMatrix one{{1.0}};
  const TimeSeries frozen = rk4_solve([](const ComplexMatrix& x) { return ComplexMatrix(x.dim()); }, one, 1.0, 0.1);
  CHECK(frozen.size() == 11);
  for (const auto& s : frozen.states) CHECK(s == one);

  auto decay = [](const ComplexMatrix& x) { return Complex(-1.0) * x; };
  const double e1 = std::abs(rk4_solve(decay, one, 1.0, 1e-3).states.back()(0, 0) - std::exp(-1.0));
  CHECK(e1 < 1e-10);
  const double coarse = std::abs(rk4_solve(decay, one, 1.0, 0.1).states.back()(0, 0) - std::exp(-1.0));
  const double fine = std::abs(rk4_solve(decay, one, 1.0, 0.05).states.back()(0, 0) - std::exp(-1.0));
  CHECK(coarse / fine == doctest::Approx(16.0).epsilon(0.1));

  const TimeSeries strided = rk4_solve(decay, one, 1.0, 0.1, 3);
  CHECK(strided.steps == std::vector<std::size_t>{0, 3, 6, 9, 10});

  auto blow_up = [](const ComplexMatrix& x) { return Complex(1e200) * x * x; };
  CHECK_THROWS_AS(rk4_solve(blow_up, ComplexMatrix{{1e200}}, 1.0, 0.1), NumericalError);
}

TEST_CASE("mean-field reference solutions") {
  const ComplexMatrix z2(2);
  // Free precession about z: Bloch x, y rotate at angular frequency 2, z is fixed.
  const ModelSpec precession = free_qubit(pauli::z(), z2, from_bloch(0.6, 0.0, 0.8));
  const auto sol = solve_meanfield_reference(precession, 1.0, 1e-3, 100);
  for (std::size_t i = 0; i < sol.series.size(); ++i) {
    const double t = sol.series.times[i];
    const ComplexMatrix u{{std::exp(-kI * t), 0.0}, {0.0, std::exp(kI * t)}};
    const ComplexMatrix oracle = u * from_bloch(0.6, 0.0, 0.8) * dagger(u);
    CHECK(max_diff(sol.series.states[i], oracle) < 1e-11);
    CHECK(bloch_vector(sol.series.states[i])[2] == doctest::Approx(0.8).epsilon(1e-12));
  }

  std::mt19937_64 rng(33);
  const ModelSpec maximally_mixed = free_qubit(test::random_hermitian(2, rng), z2,
                                               Complex(0.5) * ComplexMatrix::identity(2));
  for (const auto& s : solve_meanfield_reference(maximally_mixed, 1.0, 1e-2).series.states) {
    CHECK(max_diff(s, Complex(0.5) * ComplexMatrix::identity(2)) < 1e-15);
  }

  // Qubit kernel, H = 0, pure dephasing channel L = sigma_z: diagonal populations stay put, A^m is diagonal
  // and coherences decay as exp(-2t) times the phase exp(-i t (A_11 - A_22)) = exp(i z t).
  const ComplexMatrix m0 = from_bloch(0.6, 0.0, 0.8);
  const ModelSpec dephasing = make_spec(z2, pauli::z(), qubit_kernel(), m0);
  const auto deph = solve_meanfield_reference(dephasing, 1.0, 1e-3, 250);
  for (std::size_t i = 0; i < deph.series.size(); ++i) {
    const double t = deph.series.times[i];
    const ComplexMatrix& m = deph.series.states[i];
    CHECK(std::abs(m(0, 0) - m0(0, 0)) < 1e-12);
    CHECK(std::abs(m(1, 0) - m0(1, 0) * std::exp(-2.0 * t) * std::exp(-kI * 0.8 * t)) < 1e-11);
    const ComplexMatrix a = apply_kernel(qubit_kernel(), m);
    CHECK(a(0, 1) == Complex(0.0));
  }
}

TEST_CASE("N-body reference solutions") {
  std::mt19937_64 rng(34);
  const ComplexMatrix h = test::random_hermitian(2, rng);
  const ComplexMatrix l = Complex(0.7) * pauli::lowering();
  const ModelSpec model = make_spec(h, l, qubit_kernel(), PureState{{0.6, 0.8}, true});
  const ModelSpec free_model = model.with_kernel(InteractionKernel::zero(2));

  const auto one = solve_nbody_reference(model, 1, 0.5, 1e-3, 50);
  const auto mf = solve_meanfield_reference(free_model, 0.5, 1e-3, 50);
  for (std::size_t i = 0; i < one.series.size(); ++i) CHECK(max_diff(one.series.states[i], mf.series.states[i]) < 1e-13);

  const auto two = solve_nbody_reference(free_model, 2, 0.5, 1e-3, 50);
  for (std::size_t i = 0; i < two.series.size(); ++i) {
    CHECK(max_diff(partial_trace(two.series.states[i], 1, 2, 2), mf.series.states[i]) < 1e-9);
    CHECK(max_diff(partial_trace(two.series.states[i], 2, 2, 2), mf.series.states[i]) < 1e-9);
  }
  CHECK(two.checks.max_trace_error < 1e-8);
}
