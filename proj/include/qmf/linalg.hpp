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

// Dense complex linear algebra for small operators: single-particle d x d
// matrices and N-body d^N x d^N matrices (d^N <= 64). Storage is row-major;
// the 1-based index pair (x, y) lives at 0-based (x-1, y-1).

#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace qmf {

using Complex = std::complex<double>;

inline constexpr double kDefaultTolerance = 1e-12;

class ComplexVector {
 public:
  using Storage = boost::container::small_vector<Complex, 8>;

  ComplexVector() = default;
  explicit ComplexVector(std::size_t size) : entries_(size, Complex{}) {}
  ComplexVector(std::initializer_list<Complex> values) : entries_(values) {}

  std::size_t size() const noexcept { return entries_.size(); }
  Complex& operator[](std::size_t i) noexcept { return entries_[i]; }
  const Complex& operator[](std::size_t i) const noexcept { return entries_[i]; }
  std::span<Complex> entries() noexcept { return {entries_.data(), entries_.size()}; }
  std::span<const Complex> entries() const noexcept { return {entries_.data(), entries_.size()}; }

  double norm() const noexcept;
  bool is_finite() const noexcept;

  ComplexVector& operator+=(const ComplexVector& other);
  ComplexVector& operator-=(const ComplexVector& other);
  ComplexVector& operator*=(Complex scale) noexcept;

  friend ComplexVector operator+(ComplexVector a, const ComplexVector& b) { return a += b; }
  friend ComplexVector operator-(ComplexVector a, const ComplexVector& b) { return a -= b; }
  friend ComplexVector operator*(Complex s, ComplexVector v) { return v *= s; }
  friend bool operator==(const ComplexVector& a, const ComplexVector& b) { return a.entries_ == b.entries_; }

 private:
  Storage entries_;
};

/// <a, b> with the conjugate on the left argument.
Complex inner(const ComplexVector& a, const ComplexVector& b);

class ComplexMatrix {
 public:
  using Storage = boost::container::small_vector<Complex, 16>;

  ComplexMatrix() = default;
  /// Zero matrix of size dim x dim.
  explicit ComplexMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim, Complex{}) {}
  /// Row-major literal; throws DimensionError when rows are ragged or not square.
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const Complex> values);

  std::size_t dim() const noexcept { return dim_; }
  Complex& operator()(std::size_t row, std::size_t col) noexcept { return entries_[row * dim_ + col]; }
  const Complex& operator()(std::size_t row, std::size_t col) const noexcept {
    return entries_[row * dim_ + col];
  }
  std::span<Complex> entries() noexcept { return {entries_.data(), entries_.size()}; }
  std::span<const Complex> entries() const noexcept { return {entries_.data(), entries_.size()}; }

  bool is_finite() const noexcept;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale) noexcept;

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix m) { return m *= s; }
  friend ComplexMatrix operator*(ComplexMatrix m, Complex s) { return m *= s; }
  friend bool operator==(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a.dim_ == b.dim_ && a.entries_ == b.entries_;
  }

 private:
  std::size_t dim_ = 0;
  Storage entries_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector operator*(const ComplexMatrix& m, const ComplexVector& v);

/// State vector psi (normalized mode) or chi (unnormalized mode).
struct PureState {
  ComplexVector amplitudes;
  bool normalized = true;

  std::size_t dim() const noexcept { return amplitudes.size(); }
};

/// Matrix certified Hermitian at construction.
class HermitianOperator {
 public:
  /// Throws ConfigError when max |M(x,y) - conj(M(y,x))| exceeds `tolerance`.
  explicit HermitianOperator(ComplexMatrix matrix, double tolerance = kDefaultTolerance);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept { return matrix_.dim(); }

 private:
  ComplexMatrix matrix_;
};

ComplexMatrix dagger(const ComplexMatrix& m);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);

Complex trace(const ComplexMatrix& m);
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);
double hs_norm(const ComplexMatrix& m);

/// <psi|O|psi>; no normalization is applied.
Complex expectation(const ComplexMatrix& op, const ComplexVector& psi);
Complex expectation(const ComplexMatrix& op, const PureState& psi);

/// |psi><psi|.
ComplexMatrix density_from_pure(const PureState& psi);
ComplexMatrix outer(const ComplexVector& a, const ComplexVector& b);

/// vec(rho^dagger): out[(x-1) d + (y-1)] = conj(rho(x, y)).
ComplexVector vec_dagger(const ComplexMatrix& rho);
/// Inverse row-major reshape without conjugation; throws on non-square length.
ComplexMatrix devec(const ComplexVector& v);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// I^{(site-1)} (x) op (x) I^{(sites-site)}; `site` is 1-based.
ComplexMatrix embed_single(const ComplexMatrix& op, std::size_t site, std::size_t sites);
/// Two-body operator acting on 1-based sites site_a < site_b of `sites` factors.
/// The dimension of `pair_op` must be d^2.
ComplexMatrix embed_pair(const ComplexMatrix& pair_op, std::size_t site_a, std::size_t site_b,
                         std::size_t sites);
/// Reduced d x d state of 1-based site `keep`.
ComplexMatrix partial_trace(const ComplexMatrix& rho, std::size_t keep, std::size_t sites, std::size_t d);

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double hermiticity_violation(const ComplexMatrix& m);
ComplexMatrix hermitize(const ComplexMatrix& m);
/// Re tr(m^2).
double purity(const ComplexMatrix& m);
/// Eigenvalues of the Hermitian part, ascending.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);
double min_eigenvalue(const ComplexMatrix& m);

/// Qubit Bloch coordinates for rho = 1/2 [[1 - z, x - i y], [x + i y, 1 + z]].
std::array<double, 3> bloch_vector(const ComplexMatrix& rho);
ComplexMatrix from_bloch(double x, double y, double z);

namespace pauli {
ComplexMatrix x();
ComplexMatrix y();
/// diag(1, -1)
ComplexMatrix z();
/// |e1><e2|, maps the second basis vector onto the first.
ComplexMatrix lowering();
}  // namespace pauli

}  // namespace qmf
