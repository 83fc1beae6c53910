// Copyright 2026 The ldm Authors
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

#include "ldm/matrix.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "ldm/errors.hpp"

namespace ldm {

namespace {

std::atomic<double> g_tolerance{1e-9};

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

unsigned log2_exact(std::size_t v) {
  unsigned n = 0;
  while ((std::size_t{1} << n) < v) ++n;
  return n;
}

// Bit of qubit q (1-based) in row index r of an n-qubit Kronecker basis.
unsigned qubit_bit(std::size_t r, unsigned q, unsigned n) { return static_cast<unsigned>((r >> (n - q)) & 1U); }

bool in_outcome(std::size_t r, unsigned index, unsigned m, unsigned n) {
  for (unsigned k = 0; k < m; ++k) {
    if (qubit_bit(r, k + 1, n) != ((index >> k) & 1U)) return false;
  }
  return true;
}

}  // namespace

double tolerance() { return g_tolerance.load(std::memory_order_relaxed); }

void set_tolerance(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("tolerance must be positive");
  g_tolerance.store(eps, std::memory_order_relaxed);
}

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw DimensionError("matrix entry count " + std::to_string(data_.size()) + " does not match " +
                         std::to_string(rows_) + "x" + std::to_string(cols_));
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw DimensionError("matrix product dimension mismatch");
  ComplexMatrix out(rows_, rhs.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const Complex a = (*this)(r, k);
      if (a == Complex{}) continue;
      for (std::size_t c = 0; c < rhs.cols_; ++c) out(r, c) += a * rhs(k, c);
    }
  }
  return out;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& rhs) const {
  ComplexMatrix out = *this;
  out += rhs;
  return out;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionError("matrix difference dimension mismatch");
  ComplexMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
  return out;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionError("matrix sum dimension mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

ComplexMatrix ComplexMatrix::scaled(Complex factor) const {
  ComplexMatrix out = *this;
  for (auto& v : out.data_) v *= factor;
  return out;
}

double ComplexMatrix::max_abs() const {
  double best = 0.0;
  for (const auto& v : data_) best = std::max(best, std::abs(v));
  return best;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ar = 0; ar < a.rows(); ++ar)
    for (std::size_t ac = 0; ac < a.cols(); ++ac) {
      const Complex av = a(ar, ac);
      for (std::size_t br = 0; br < b.rows(); ++br)
        for (std::size_t bc = 0; bc < b.cols(); ++bc) out(ar * b.rows() + br, ac * b.cols() + bc) = av * b(br, bc);
    }
  return out;
}

bool approx_eq(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("approx_eq on " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " and " +
                         std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  return (a - b).max_abs() <= tol;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a) {
  const auto n = static_cast<Eigen::Index>(a.rows());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c)
      m(r, c) = 0.5 * (a(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) +
                       std::conj(a(static_cast<std::size_t>(c), static_cast<std::size_t>(r))));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix validate_density(const ComplexMatrix& mat) {
  const double eps = tolerance();
  if (!mat.square() || !is_power_of_two(mat.rows())) {
    throw DensityError(DensityCheck::NotSquarePowerOfTwo, 0.0,
                       "matrix is " + std::to_string(mat.rows()) + "x" + std::to_string(mat.cols()) +
                           ", expected 2^n x 2^n");
  }
  const double herm = (mat - mat.adjoint()).max_abs();
  if (herm > eps) {
    throw DensityError(DensityCheck::NotHermitian, herm, "max |M - M†| = " + format_number(herm));
  }
  const auto ev = hermitian_eigenvalues(mat);
  if (!ev.empty() && ev.front() < -eps) {
    throw DensityError(DensityCheck::NotPositive, ev.front(), "eigenvalue " + format_number(ev.front()));
  }
  const Complex tr = mat.trace();
  const double dev = std::abs(tr - 1.0);
  if (dev > eps) {
    throw DensityError(DensityCheck::TraceNotOne, dev, "trace = " + format_complex(tr));
  }
  return DensityMatrix(log2_exact(mat.rows()), mat);
}

DensityMatrix trusted_density(ComplexMatrix mat) {
  if (!mat.square() || !is_power_of_two(mat.rows())) {
    throw DensityError(DensityCheck::NotSquarePowerOfTwo, 0.0, "matrix is not 2^n x 2^n");
  }
  const unsigned n = log2_exact(mat.rows());
  return DensityMatrix(n, std::move(mat));
}

DensityMatrix DensityMatrix::basis(std::string_view bits) {
  std::size_t index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("basis label must be a bit string");
    index = (index << 1) | static_cast<std::size_t>(c - '0');
  }
  const std::size_t dim = std::size_t{1} << bits.size();
  ComplexMatrix m(dim, dim);
  m(index, index) = 1.0;
  return trusted_density(std::move(m));
}

DensityMatrix DensityMatrix::plus() { return trusted_density(ComplexMatrix(2, 2, {0.5, 0.5, 0.5, 0.5})); }

DensityMatrix DensityMatrix::minus() { return trusted_density(ComplexMatrix(2, 2, {0.5, -0.5, -0.5, 0.5})); }

DensityMatrix DensityMatrix::bell00() {
  ComplexMatrix m(4, 4);
  m(0, 0) = m(0, 3) = m(3, 0) = m(3, 3) = 0.5;
  return trusted_density(std::move(m));
}

DensityMatrix DensityMatrix::ground(unsigned n) { return basis(std::string(n, '0')); }

// ---------------------------------------------------------------------------
// Unitaries

UnitaryOp UnitaryOp::from_matrix(const ComplexMatrix& mat) {
  if (!mat.square() || !is_power_of_two(mat.rows())) {
    throw DensityError(DensityCheck::NotSquarePowerOfTwo, 0.0, "gate matrix is not 2^m x 2^m");
  }
  const double dev = (mat.adjoint() * mat - ComplexMatrix::identity(mat.rows())).max_abs();
  if (dev > tolerance()) {
    throw DensityError(DensityCheck::NotUnitary, dev, "max |U†U - I| = " + format_number(dev));
  }
  return UnitaryOp(log2_exact(mat.rows()), mat);
}

UnitaryOp tensor(const UnitaryOp& a, const UnitaryOp& b) {
  return UnitaryOp(a.m_ + b.m_, tensor(a.mat_, b.mat_));
}

UnitaryOp extend(const UnitaryOp& u, unsigned n) {
  if (u.m_ > n) throw ArityError(u.m_, n);
  if (u.m_ == n) return u;
  return UnitaryOp(n, tensor(u.mat_, ComplexMatrix::identity(std::size_t{1} << (n - u.m_))));
}

namespace gates {

UnitaryOp identity(unsigned n) { return UnitaryOp::from_matrix(ComplexMatrix::identity(std::size_t{1} << n)); }

UnitaryOp x() { return UnitaryOp::from_matrix(ComplexMatrix(2, 2, {0.0, 1.0, 1.0, 0.0})); }

UnitaryOp y() { return UnitaryOp::from_matrix(ComplexMatrix(2, 2, {0.0, Complex(0, -1), Complex(0, 1), 0.0})); }

UnitaryOp z() { return UnitaryOp::from_matrix(ComplexMatrix(2, 2, {1.0, 0.0, 0.0, -1.0})); }

UnitaryOp h() {
  const double s = 1.0 / std::sqrt(2.0);
  return UnitaryOp::from_matrix(ComplexMatrix(2, 2, {s, s, s, -s}));
}

UnitaryOp cnot() {
  ComplexMatrix m(4, 4);
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
  return UnitaryOp::from_matrix(m);
}

UnitaryOp named(std::string_view name) {
  if (name == "X") return x();
  if (name == "Y") return y();
  if (name == "Z") return z();
  if (name == "H") return h();
  if (name == "CNOT") return cnot();
  if (name == "I") return identity(1);
  throw std::out_of_range("unknown gate " + std::string(name));
}

}  // namespace gates

DensityMatrix evolve(const DensityMatrix& rho, const UnitaryOp& u) {
  const UnitaryOp full = extend(u, rho.qubits());
  ComplexMatrix out = full.matrix() * rho.matrix() * full.matrix().adjoint();
  return trusted_density(std::move(out));
}

// ---------------------------------------------------------------------------
// Measurement

ComplexMatrix outcome_projector(unsigned index, unsigned m, unsigned n) {
  if (m > n) throw ArityError(m, n);
  const std::size_t dim = std::size_t{1} << n;
  ComplexMatrix p(dim, dim);
  for (std::size_t r = 0; r < dim; ++r)
    if (in_outcome(r, index, m, n)) p(r, r) = 1.0;
  return p;
}

std::vector<MeasurementOutcome> measure_comp(const DensityMatrix& rho, unsigned m) {
  const unsigned n = rho.qubits();
  if (m > n) throw ArityError(m, n);
  const std::size_t dim = rho.dim();
  const ComplexMatrix& mat = rho.matrix();
  std::vector<MeasurementOutcome> out;
  for (unsigned i = 0; i < (1U << m); ++i) {
    double p = 0.0;
    for (std::size_t r = 0; r < dim; ++r)
      if (in_outcome(r, i, m, n)) p += mat(r, r).real();
    if (p <= tolerance()) continue;
    ComplexMatrix post(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
      if (!in_outcome(r, i, m, n)) continue;
      for (std::size_t c = 0; c < dim; ++c)
        if (in_outcome(c, i, m, n)) post(r, c) = mat(r, c) / p;
    }
    out.push_back({p, i, trusted_density(std::move(post))});
  }
  return out;
}

ComplexMatrix measure_mixture(const DensityMatrix& rho, unsigned m) {
  const unsigned n = rho.qubits();
  if (m > n) throw ArityError(m, n);
  const std::size_t dim = rho.dim();
  ComplexMatrix out(dim, dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) {
      bool same = true;
      for (unsigned k = 1; k <= m; ++k) same = same && qubit_bit(r, k, n) == qubit_bit(c, k, n);
      if (same) out(r, c) = rho.matrix()(r, c);
    }
  return out;
}

ComplexMatrix trace_out_front(const ComplexMatrix& rho, unsigned k) {
  if (!rho.square() || !is_power_of_two(rho.rows())) throw DimensionError("partial trace needs a 2^n x 2^n matrix");
  const unsigned n = log2_exact(rho.rows());
  if (k > n) throw ArityError(k, n);
  const std::size_t front = std::size_t{1} << k;
  const std::size_t back = std::size_t{1} << (n - k);
  ComplexMatrix out(back, back);
  for (std::size_t f = 0; f < front; ++f)
    for (std::size_t r = 0; r < back; ++r)
      for (std::size_t c = 0; c < back; ++c) out(r, c) += rho(f * back + r, f * back + c);
  return out;
}

DensityMatrix mix(std::span<const std::pair<double, DensityMatrix>> parts) {
  if (parts.empty()) throw DimensionError("mixture of zero states");
  const std::size_t dim = parts.front().second.dim();
  ComplexMatrix sum(dim, dim);
  for (const auto& [w, rho] : parts) {
    if (rho.dim() != dim) throw DimensionError("mixture of states with different dimensions");
    sum += rho.matrix().scaled(w);
  }
  const double eps = tolerance();
  // Weights carry their own rounding; allow it to accumulate per addend.
  const double slack = eps * 10.0 * static_cast<double>(parts.size());
  const Complex tr = sum.trace();
  if (std::abs(tr - 1.0) > slack) {
    throw DensityError(DensityCheck::TraceNotOne, std::abs(tr - 1.0), "mixture trace = " + format_complex(tr));
  }
  return trusted_density(std::move(sum));
}

// ---------------------------------------------------------------------------
// Formatting

std::string format_number(double x, int significant) {
  if (std::abs(x) < 1e-15) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant, x);
  return buf;
}

std::string format_complex(Complex z, int significant) {
  const double eps = 1e-15;
  const bool has_re = std::abs(z.real()) >= eps;
  const bool has_im = std::abs(z.imag()) >= eps;
  if (!has_im) return format_number(z.real(), significant);
  std::string im = format_number(std::abs(z.imag()), significant) + "i";
  if (!has_re) return (z.imag() < 0 ? "-" : "") + im;
  return format_number(z.real(), significant) + (z.imag() < 0 ? "-" : "+") + im;
}

std::string format_matrix(const ComplexMatrix& m, int significant) {
  std::string out = "[";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (r) out += "; ";
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out += ", ";
      out += format_complex(m(r, c), significant);
    }
  }
  return out + "]";
}

}  // namespace ldm
