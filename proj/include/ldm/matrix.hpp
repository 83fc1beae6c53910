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

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ldm {

using Complex = std::complex<double>;

/// Global comparison tolerance used by every approximate check in the
/// library. Defaults to 1e-9.
double tolerance();
void set_tolerance(double eps);

/// Dense complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix zero(std::size_t rows, std::size_t cols) { return {rows, cols}; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Complex operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::span<const Complex> entries() const { return data_; }

  ComplexMatrix adjoint() const;
  Complex trace() const;

  ComplexMatrix operator*(const ComplexMatrix& rhs) const;
  ComplexMatrix operator+(const ComplexMatrix& rhs) const;
  ComplexMatrix operator-(const ComplexMatrix& rhs) const;
  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix scaled(Complex factor) const;

  /// Largest entry-wise modulus.
  double max_abs() const;

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// Kronecker product; dimensions multiply.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

/// True iff max |a - b| <= tol. Throws DimensionError on shape mismatch.
bool approx_eq(const ComplexMatrix& a, const ComplexMatrix& b, double tol);

/// Eigenvalues of the Hermitian part (a + a†)/2, ascending.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a);

/// A validated n-qubit density matrix: Hermitian, PSD, unit trace.
class DensityMatrix {
 public:
  /// Pure basis state |bits><bits| for a string of '0'/'1'.
  static DensityMatrix basis(std::string_view bits);
  static DensityMatrix plus();
  static DensityMatrix minus();
  static DensityMatrix bell00();
  /// |0..0><0..0| on n qubits.
  static DensityMatrix ground(unsigned n);

  unsigned qubits() const { return n_; }
  std::size_t dim() const { return mat_.rows(); }
  const ComplexMatrix& matrix() const { return mat_; }

 private:
  friend DensityMatrix validate_density(const ComplexMatrix& mat);
  friend DensityMatrix trusted_density(ComplexMatrix mat);
  DensityMatrix(unsigned n, ComplexMatrix mat) : n_(n), mat_(std::move(mat)) {}

  unsigned n_ = 0;
  ComplexMatrix mat_;
};

/// Checks all density invariants and infers the qubit count.
/// Throws DensityError naming the violated check and its deviation.
DensityMatrix validate_density(const ComplexMatrix& mat);

/// Wraps a matrix that is a density matrix by construction (output of a
/// trace-preserving operation on a validated input); only the shape is checked.
DensityMatrix trusted_density(ComplexMatrix mat);

class UnitaryOp {
 public:
  /// Throws DensityError-style diagnostics (NotUnitary) when mat†mat != I.
  static UnitaryOp from_matrix(const ComplexMatrix& mat);

  unsigned arity() const { return m_; }
  const ComplexMatrix& matrix() const { return mat_; }

 private:
  UnitaryOp(unsigned m, ComplexMatrix mat) : m_(m), mat_(std::move(mat)) {}
  friend UnitaryOp tensor(const UnitaryOp& a, const UnitaryOp& b);
  friend UnitaryOp extend(const UnitaryOp& u, unsigned n);

  unsigned m_ = 0;
  ComplexMatrix mat_;
};

UnitaryOp tensor(const UnitaryOp& a, const UnitaryOp& b);

/// u ⊗ I on n qubits (identity padded on the right). Throws ArityError if
/// u.arity() > n.
UnitaryOp extend(const UnitaryOp& u, unsigned n);

namespace gates {
UnitaryOp identity(unsigned n);
UnitaryOp x();
UnitaryOp y();
UnitaryOp z();
UnitaryOp h();
UnitaryOp cnot();
/// "X", "Y", "Z", "H" or "CNOT". Throws std::out_of_range otherwise.
UnitaryOp named(std::string_view name);
}  // namespace gates

/// Ū ρ Ū† with Ū = u ⊗ I.
DensityMatrix evolve(const DensityMatrix& rho, const UnitaryOp& u);

struct MeasurementOutcome {
  double prob;
  /// Outcome label; bit k holds the measured value of qubit k+1.
  unsigned index;
  DensityMatrix state;
};

/// Computational-basis measurement of the first m qubits. Outcomes with
/// probability <= tolerance() are dropped.
std::vector<MeasurementOutcome> measure_comp(const DensityMatrix& rho, unsigned m);

/// Σ_i π̄_i ρ π̄_i† over all 2^m projectors, i.e. the unobserved measurement.
ComplexMatrix measure_mixture(const DensityMatrix& rho, unsigned m);

/// Projector π̄_i = |i><i| ⊗ I on n qubits using the outcome labelling above.
ComplexMatrix outcome_projector(unsigned index, unsigned m, unsigned n);

/// Partial trace over the first k qubits.
ComplexMatrix trace_out_front(const ComplexMatrix& rho, unsigned k);

/// Σ w_i ρ_i, validated. Weights must be non-empty and match in dimension.
DensityMatrix mix(std::span<const std::pair<double, DensityMatrix>> parts);

/// Formats a real with 12 significant digits.
std::string format_number(double x, int significant = 12);
std::string format_complex(Complex z, int significant = 12);
std::string format_matrix(const ComplexMatrix& m, int significant = 12);

}  // namespace ldm
