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

#include "qmf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "qmf/error.hpp"

namespace qmf {
namespace {

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.dim() != b.dim()) {
    throw DimensionError(std::string(op) + ": dimension mismatch " + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()));
  }
}

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) out *= base;
  return out;
}

bool finite(const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

double ComplexVector::norm() const noexcept {
  double sum = 0.0;
  for (const auto& z : entries_) sum += std::norm(z);
  return std::sqrt(sum);
}

bool ComplexVector::is_finite() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(), finite);
}

ComplexVector& ComplexVector::operator+=(const ComplexVector& other) {
  if (size() != other.size()) throw DimensionError("vector +=: size mismatch");
  for (std::size_t i = 0; i < size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

ComplexVector& ComplexVector::operator-=(const ComplexVector& other) {
  if (size() != other.size()) throw DimensionError("vector -=: size mismatch");
  for (std::size_t i = 0; i < size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

ComplexVector& ComplexVector::operator*=(Complex scale) noexcept {
  for (auto& z : entries_) z *= scale;
  return *this;
}

Complex inner(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size()) throw DimensionError("inner: size mismatch");
  Complex sum{};
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::conj(a[i]) * b[i];
  return sum;
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : dim_(rows.size()) {
  entries_.reserve(dim_ * dim_);
  for (const auto& row : rows) {
    if (row.size() != dim_) throw DimensionError("matrix literal is not square");
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix out(dim);
  for (std::size_t i = 0; i < dim; ++i) out(i, i) = 1.0;
  return out;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> values) {
  ComplexMatrix out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out(i, i) = values[i];
  return out;
}

bool ComplexMatrix::is_finite() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(), finite);
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_dim(*this, other, "matrix +=");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_dim(*this, other, "matrix -=");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) noexcept {
  for (auto& z : entries_) z *= scale;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "matrix product");
  const std::size_t n = a.dim();
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

ComplexVector operator*(const ComplexMatrix& m, const ComplexVector& v) {
  if (m.dim() != v.size()) throw DimensionError("matrix-vector product: dimension mismatch");
  const std::size_t n = m.dim();
  ComplexVector out(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex sum{};
    for (std::size_t j = 0; j < n; ++j) sum += m(i, j) * v[j];
    out[i] = sum;
  }
  return out;
}

HermitianOperator::HermitianOperator(ComplexMatrix matrix, double tolerance) : matrix_(std::move(matrix)) {
  const double violation = hermiticity_violation(matrix_);
  if (!(violation <= tolerance)) {
    throw ConfigError("operator is not Hermitian: max |M(x,y) - conj(M(y,x))| = " +
                      std::to_string(violation));
  }
}

ComplexMatrix dagger(const ComplexMatrix& m) {
  const std::size_t n = m.dim();
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = std::conj(m(j, i));
  return out;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "commutator");
  return a * b - b * a;
}

ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "anticommutator");
  return a * b + b * a;
}

Complex trace(const ComplexMatrix& m) {
  Complex sum{};
  for (std::size_t i = 0; i < m.dim(); ++i) sum += m(i, i);
  return sum;
}

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "hs_inner");
  Complex sum{};
  const auto ea = a.entries();
  const auto eb = b.entries();
  for (std::size_t i = 0; i < ea.size(); ++i) sum += std::conj(ea[i]) * eb[i];
  return sum;
}

double hs_norm(const ComplexMatrix& m) {
  double sum = 0.0;
  for (const auto& z : m.entries()) sum += std::norm(z);
  return std::sqrt(sum);
}

Complex expectation(const ComplexMatrix& op, const ComplexVector& psi) {
  if (op.dim() != psi.size()) throw DimensionError("expectation: dimension mismatch");
  return inner(psi, op * psi);
}

Complex expectation(const ComplexMatrix& op, const PureState& psi) { return expectation(op, psi.amplitudes); }

ComplexMatrix outer(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size()) throw DimensionError("outer: size mismatch");
  const std::size_t n = a.size();
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = a[i] * std::conj(b[j]);
  return out;
}

ComplexMatrix density_from_pure(const PureState& psi) { return outer(psi.amplitudes, psi.amplitudes); }

ComplexVector vec_dagger(const ComplexMatrix& rho) {
  const auto src = rho.entries();
  ComplexVector out(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) out[i] = std::conj(src[i]);
  return out;
}

ComplexMatrix devec(const ComplexVector& v) {
  const auto d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (d * d != v.size() || d == 0) {
    throw DimensionError("devec: length " + std::to_string(v.size()) + " is not a perfect square");
  }
  ComplexMatrix out(d);
  auto dst = out.entries();
  for (std::size_t i = 0; i < v.size(); ++i) dst[i] = v[i];
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t na = a.dim();
  const std::size_t nb = b.dim();
  ComplexMatrix out(na * nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{}) continue;
      for (std::size_t k = 0; k < nb; ++k)
        for (std::size_t l = 0; l < nb; ++l) out(i * nb + k, j * nb + l) = aij * b(k, l);
    }
  return out;
}

ComplexMatrix embed_single(const ComplexMatrix& op, std::size_t site, std::size_t sites) {
  if (site < 1 || site > sites) {
    throw DimensionError("embed_single: site " + std::to_string(site) + " outside 1.." + std::to_string(sites));
  }
  const std::size_t d = op.dim();
  ComplexMatrix out = kron(ComplexMatrix::identity(ipow(d, site - 1)), op);
  return kron(out, ComplexMatrix::identity(ipow(d, sites - site)));
}

ComplexMatrix embed_pair(const ComplexMatrix& pair_op, std::size_t site_a, std::size_t site_b,
                         std::size_t sites) {
  if (site_a < 1 || site_a >= site_b || site_b > sites) {
    throw DimensionError("embed_pair: need 1 <= site_a < site_b <= sites, got (" + std::to_string(site_a) + ", " +
                         std::to_string(site_b) + ", " + std::to_string(sites) + ")");
  }
  const auto d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(pair_op.dim()))));
  if (d * d != pair_op.dim()) throw DimensionError("embed_pair: operator dimension is not d^2");

  const std::size_t total = ipow(d, sites);
  // Site s (1-based) is the digit with stride d^(sites - s).
  const std::size_t stride_a = ipow(d, sites - site_a);
  const std::size_t stride_b = ipow(d, sites - site_b);
  ComplexMatrix out(total);
  for (std::size_t row = 0; row < total; ++row) {
    const std::size_t ra = (row / stride_a) % d;
    const std::size_t rb = (row / stride_b) % d;
    const std::size_t rest = row - ra * stride_a - rb * stride_b;
    for (std::size_t ca = 0; ca < d; ++ca)
      for (std::size_t cb = 0; cb < d; ++cb) {
        const Complex v = pair_op(ra * d + rb, ca * d + cb);
        if (v == Complex{}) continue;
        out(row, rest + ca * stride_a + cb * stride_b) = v;
      }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, std::size_t keep, std::size_t sites, std::size_t d) {
  if (keep < 1 || keep > sites) {
    throw DimensionError("partial_trace: keep " + std::to_string(keep) + " outside 1.." + std::to_string(sites));
  }
  const std::size_t total = ipow(d, sites);
  if (rho.dim() != total) {
    throw DimensionError("partial_trace: dimension " + std::to_string(rho.dim()) + " is not d^N = " +
                         std::to_string(total));
  }
  const std::size_t stride = ipow(d, sites - keep);
  ComplexMatrix out(d);
  for (std::size_t row = 0; row < total; ++row) {
    const std::size_t x = (row / stride) % d;
    const std::size_t rest = row - x * stride;
    for (std::size_t y = 0; y < d; ++y) out(x, y) += rho(row, rest + y * stride);
  }
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "max_abs_diff");
  double worst = 0.0;
  const auto ea = a.entries();
  const auto eb = b.entries();
  for (std::size_t i = 0; i < ea.size(); ++i) worst = std::max(worst, std::abs(ea[i] - eb[i]));
  return worst;
}

double hermiticity_violation(const ComplexMatrix& m) {
  double worst = 0.0;
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = i; j < m.dim(); ++j) worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
  return worst;
}

ComplexMatrix hermitize(const ComplexMatrix& m) {
  ComplexMatrix out(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) out(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  return out;
}

double purity(const ComplexMatrix& m) {
  // tr(m^2) = sum_{ij} m(i,j) m(j,i)
  Complex sum{};
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) sum += m(i, j) * m(j, i);
  return sum.real();
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.dim());
  Eigen::MatrixXcd dense(n, n);
  const ComplexMatrix h = hermitize(m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) dense(i, j) = h(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense, Eigen::EigenvaluesOnly);
  const auto& values = solver.eigenvalues();
  return {values.data(), values.data() + values.size()};
}

double min_eigenvalue(const ComplexMatrix& m) {
  if (m.dim() == 0) throw DimensionError("min_eigenvalue: empty matrix");
  return hermitian_eigenvalues(m).front();
}

std::array<double, 3> bloch_vector(const ComplexMatrix& rho) {
  if (rho.dim() != 2) throw DimensionError("bloch_vector: qubit state required");
  const Complex off = rho(1, 0);
  return {2.0 * off.real(), 2.0 * off.imag(), (rho(1, 1) - rho(0, 0)).real()};
}

ComplexMatrix from_bloch(double x, double y, double z) {
  return ComplexMatrix{{{0.5 * (1.0 - z), 0.0}, {0.5 * x, -0.5 * y}},
                       {{0.5 * x, 0.5 * y}, {0.5 * (1.0 + z), 0.0}}};
}

namespace pauli {

ComplexMatrix x() { return ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix y() { return ComplexMatrix{{0.0, Complex{0.0, -1.0}}, {Complex{0.0, 1.0}, 0.0}}; }
ComplexMatrix z() { return ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}}; }
ComplexMatrix lowering() { return ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}}; }

}  // namespace pauli
}  // namespace qmf
