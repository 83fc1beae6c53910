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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ldm/errors.hpp"

using namespace ldm;

namespace {

const double kSqrt3 = std::sqrt(3.0);

ComplexMatrix coin_rho() { return ComplexMatrix(2, 2, {0.75, kSqrt3 / 4, kSqrt3 / 4, 0.25}); }

// A A† / tr(A A†) for a random complex A.
ComplexMatrix random_density(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> g;
  ComplexMatrix a(dim, dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) a(r, c) = Complex(g(rng), g(rng));
  ComplexMatrix p = a * a.adjoint();
  return p.scaled(1.0 / p.trace().real());
}

ComplexMatrix random_unitary(std::mt19937_64& rng, unsigned m) {
  // D2 · H^{⊗m} · D1 with random diagonal phases.
  std::uniform_real_distribution<double> u(0.0, 6.283185307179586);
  const std::size_t dim = std::size_t{1} << m;
  ComplexMatrix d(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) d(i, i) = std::polar(1.0, u(rng));
  ComplexMatrix h = gates::h().matrix();
  ComplexMatrix layer = h;
  for (unsigned k = 1; k < m; ++k) layer = tensor(layer, h);
  ComplexMatrix d2(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) d2(i, i) = std::polar(1.0, u(rng));
  return d2 * layer * d;
}

ComplexMatrix kron_oracle(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j)
      out(i, j) = a(i / b.rows(), j / b.cols()) * b(i % b.rows(), j % b.cols());
  return out;
}

}  // namespace

TEST(Matrix, TensorIdentities) {
  EXPECT_EQ(tensor(ComplexMatrix::identity(2), ComplexMatrix::identity(2)), ComplexMatrix::identity(4));
  ComplexMatrix k = tensor(DensityMatrix::basis("0").matrix(), DensityMatrix::basis("1").matrix());
  ComplexMatrix expect(4, 4);
  expect(1, 1) = 1.0;
  EXPECT_EQ(k, expect);
}

TEST(Matrix, TensorMatchesElementwiseOracle) {
  ComplexMatrix prod = tensor(coin_rho(), DensityMatrix::bell00().matrix());
  ASSERT_EQ(prod.rows(), 8u);
  EXPECT_TRUE(approx_eq(prod, kron_oracle(coin_rho(), DensityMatrix::bell00().matrix()), 0.0));
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) {
    ComplexMatrix a = random_density(rng, 2), b = random_density(rng, 4);
    EXPECT_TRUE(approx_eq(tensor(a, b), kron_oracle(a, b), 0.0));
  }
}

TEST(Matrix, TensorAssociativeAndAdjointDistributes) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20; ++i) {
    ComplexMatrix a = random_density(rng, 2), b = random_unitary(rng, 1), c = random_density(rng, 2);
    EXPECT_TRUE(approx_eq(tensor(tensor(a, b), c), tensor(a, tensor(b, c)), 1e-15));
    EXPECT_EQ(tensor(a, b).adjoint(), tensor(a.adjoint(), b.adjoint()));
  }
}

TEST(Matrix, ExtendPadsOnTheRight) {
  EXPECT_EQ(extend(gates::h(), 1).matrix(), gates::h().matrix());
  ComplexMatrix z2(4, 4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1, 0, 0, 0, 0, -1});
  EXPECT_EQ(extend(gates::z(), 2).matrix(), z2);
  EXPECT_THROW(extend(gates::cnot(), 1), ArityError);
}

TEST(Matrix, ExtendedCnotActsOnBasisKets) {
  UnitaryOp u = extend(gates::cnot(), 3);
  EXPECT_TRUE(approx_eq(u.matrix().adjoint() * u.matrix(), ComplexMatrix::identity(8), 1e-12));
  for (unsigned in = 0; in < 8; ++in) {
    unsigned q1 = (in >> 2) & 1, q2 = (in >> 1) & 1, q3 = in & 1;
    unsigned expected = (q1 << 2) | ((q2 ^ q1) << 1) | q3;
    ComplexMatrix ket(8, 1);
    ket(in, 0) = 1.0;
    ComplexMatrix out = u.matrix() * ket;
    for (unsigned r = 0; r < 8; ++r) EXPECT_EQ(out(r, 0), Complex(r == expected ? 1.0 : 0.0)) << in << "->" << r;
  }
}

TEST(Matrix, EvolveExamples) {
  DensityMatrix plus = evolve(DensityMatrix::basis("0"), gates::h());
  EXPECT_TRUE(approx_eq(plus.matrix(), DensityMatrix::plus().matrix(), 1e-12));

  DensityMatrix rho = validate_density(coin_rho());
  DensityMatrix minus = evolve(rho, gates::z());
  ComplexMatrix expect(2, 2, {0.75, -kSqrt3 / 4, -kSqrt3 / 4, 0.25});
  EXPECT_TRUE(approx_eq(minus.matrix(), expect, 1e-12));

  // Teleportation first step: CNOT on qubits 1,2 of ρ ⊗ β00.
  DensityMatrix rho30 = validate_density(tensor(coin_rho(), DensityMatrix::bell00().matrix()));
  DensityMatrix rho31 = evolve(rho30, gates::cnot());
  ComplexMatrix cn = tensor(gates::cnot().matrix(), ComplexMatrix::identity(2));
  EXPECT_TRUE(approx_eq(rho31.matrix(), cn * rho30.matrix() * cn.adjoint(), 1e-12));
  EXPECT_NO_THROW(validate_density(rho31.matrix()));
  EXPECT_THROW(evolve(DensityMatrix::basis("0"), gates::cnot()), ArityError);
}

TEST(Matrix, MeasureExamples) {
  auto plus = measure_comp(DensityMatrix::plus(), 1);
  ASSERT_EQ(plus.size(), 2u);
  EXPECT_NEAR(plus[0].prob, 0.5, 1e-12);
  EXPECT_EQ(plus[0].index, 0u);
  EXPECT_TRUE(approx_eq(plus[0].state.matrix(), DensityMatrix::basis("0").matrix(), 1e-12));
  EXPECT_EQ(plus[1].index, 1u);
  EXPECT_TRUE(approx_eq(plus[1].state.matrix(), DensityMatrix::basis("1").matrix(), 1e-12));

  auto coin = measure_comp(validate_density(coin_rho()), 1);
  ASSERT_EQ(coin.size(), 2u);
  EXPECT_NEAR(coin[0].prob, 0.75, 1e-12);
  EXPECT_NEAR(coin[1].prob, 0.25, 1e-12);

  auto ground = measure_comp(DensityMatrix::basis("0"), 1);
  ASSERT_EQ(ground.size(), 1u);
  EXPECT_EQ(ground[0].index, 0u);
  EXPECT_DOUBLE_EQ(ground[0].prob, 1.0);
  EXPECT_THROW(measure_comp(DensityMatrix::basis("0"), 2), ArityError);
}

TEST(Matrix, OutcomeLabelIsLittleEndianOverQubits) {
  // |10>: qubit 1 is 1, qubit 2 is 0, so the 2-qubit outcome label is 0b01.
  auto out = measure_comp(DensityMatrix::basis("10"), 2);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].index, 1u);
  auto out2 = measure_comp(DensityMatrix::basis("01"), 2);
  EXPECT_EQ(out2[0].index, 2u);
}

TEST(Matrix, ValidateDensityDiagnostics) {
  DensityMatrix ok = validate_density(ComplexMatrix(2, 2, {1, 0, 0, 0}));
  EXPECT_EQ(ok.qubits(), 1u);
  try {
    validate_density(ComplexMatrix(2, 2, {1, 0, 0, 1}));
    FAIL();
  } catch (const DensityError& e) {
    EXPECT_EQ(e.check, DensityCheck::TraceNotOne);
    EXPECT_NEAR(e.deviation, 1.0, 1e-12);
  }
  try {
    validate_density(ComplexMatrix(2, 2, {0.5, 0.6, 0.6, 0.5}));
    FAIL();
  } catch (const DensityError& e) {
    EXPECT_EQ(e.check, DensityCheck::NotPositive);
    // Closed form for [[a,b],[b,a]]: a - b.
    EXPECT_NEAR(e.deviation, 0.5 - 0.6, 1e-12);
  }
  try {
    validate_density(ComplexMatrix(2, 2, {0.5, 0.1, 0.2, 0.5}));
    FAIL();
  } catch (const DensityError& e) {
    EXPECT_EQ(e.check, DensityCheck::NotHermitian);
  }
  try {
    validate_density(ComplexMatrix(3, 3));
    FAIL();
  } catch (const DensityError& e) {
    EXPECT_EQ(e.check, DensityCheck::NotSquarePowerOfTwo);
  }
}

TEST(Matrix, ApproxEq) {
  ComplexMatrix a = coin_rho();
  EXPECT_TRUE(approx_eq(a, a, 1e-9));
  EXPECT_TRUE(approx_eq(ComplexMatrix(2, 2, {5.0 / 8, 0, 0, 3.0 / 8}), ComplexMatrix(2, 2, {0.625, 0, 0, 0.375}), 1e-9));
  EXPECT_FALSE(approx_eq(DensityMatrix::plus().matrix(), DensityMatrix::minus().matrix(), 1e-9));
  EXPECT_THROW(approx_eq(ComplexMatrix(2, 2), ComplexMatrix(4, 4), 1e-9), DimensionError);
}

TEST(MatrixProperty, EvolvePreservesDensity) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const unsigned n = 1 + i % 3;
    const unsigned m = 1 + (i / 3) % n;
    DensityMatrix rho = validate_density(random_density(rng, std::size_t{1} << n));
    UnitaryOp u = UnitaryOp::from_matrix(random_unitary(rng, m));
    EXPECT_NO_THROW(validate_density(evolve(rho, u).matrix()));
    EXPECT_NO_THROW(UnitaryOp::from_matrix(extend(u, n).matrix()));
  }
}

TEST(MatrixProperty, MeasurementConservesAndIsIdempotent) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const unsigned n = 1 + i % 3;
    const unsigned m = (i / 3) % (n + 1);
    DensityMatrix rho = validate_density(random_density(rng, std::size_t{1} << n));
    auto outs = measure_comp(rho, m);
    double total = 0.0;
    ComplexMatrix weighted(rho.dim(), rho.dim());
    for (const auto& o : outs) {
      total += o.prob;
      weighted += o.state.matrix().scaled(o.prob);
      EXPECT_NO_THROW(validate_density(o.state.matrix()));
      auto again = measure_comp(o.state, m);
      ASSERT_EQ(again.size(), 1u);
      EXPECT_EQ(again[0].index, o.index);
      EXPECT_NEAR(again[0].prob, 1.0, 1e-12);
    }
    EXPECT_NEAR(total, 1.0, (1 << m) * 1e-9);
    ComplexMatrix projected(rho.dim(), rho.dim());
    for (unsigned k = 0; k < (1U << m); ++k) {
      ComplexMatrix p = outcome_projector(k, m, n);
      projected += p * rho.matrix() * p.adjoint();
    }
    EXPECT_TRUE(approx_eq(weighted, projected, 1e-9));
    EXPECT_TRUE(approx_eq(measure_mixture(rho, m), projected, 1e-12));
  }
}

TEST(Matrix, PartialTraceAndMix) {
  ComplexMatrix joint = tensor(DensityMatrix::basis("10").matrix(), coin_rho());
  EXPECT_TRUE(approx_eq(trace_out_front(joint, 2), coin_rho(), 1e-15));
  std::vector<std::pair<double, DensityMatrix>> parts = {{5.0 / 8, DensityMatrix::basis("0")},
                                                        {3.0 / 8, DensityMatrix::basis("1")}};
  EXPECT_TRUE(approx_eq(mix(parts).matrix(), ComplexMatrix(2, 2, {0.625, 0, 0, 0.375}), 1e-15));
  parts.push_back({0.5, DensityMatrix::basis("1")});
  EXPECT_THROW(mix(parts), DensityError);
}

TEST(Matrix, Formatting) {
  EXPECT_EQ(format_number(0.625), "0.625");
  EXPECT_EQ(format_number(-1e-17), "0");
  EXPECT_EQ(format_complex(Complex(0.5, -0.25)), "0.5-0.25i");
  EXPECT_EQ(format_matrix(ComplexMatrix(2, 2, {0.625, 0, 0, 0.375})), "[0.625, 0; 0, 0.375]");
}
