// Copyright 2026 The qinstr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <limits>
#include <vector>

#include "test_util.hpp"

namespace qinstr {
namespace {

using testing::diag;
using testing::max_abs_diff;

TEST(ColVec, IdentityStacksColumns) {
  const ComplexVector v = col_vec(identity(2));
  ASSERT_EQ(v.size(), 4);
  EXPECT_EQ(v(0), cplx(1.0));
  EXPECT_EQ(v(1), cplx(0.0));
  EXPECT_EQ(v(2), cplx(0.0));
  EXPECT_EQ(v(3), cplx(1.0));
}

TEST(ColVec, ColumnMajorOrder) {
  ComplexMatrix a(2, 3);
  a << 1.0, 2.0, 3.0, 4.0, 5.0, 6.0;
  const ComplexVector v = col_vec(a);
  const std::vector<double> want{1.0, 4.0, 2.0, 5.0, 3.0, 6.0};
  for (std::size_t k = 0; k < want.size(); ++k) EXPECT_EQ(v(static_cast<Eigen::Index>(k)), cplx(want[k]));
}

TEST(ColVec, UncolInvertsExactly) {
  Rng rng(11);
  const ComplexMatrix a = rng.ginibre(3, 5);
  EXPECT_EQ(max_abs_diff(uncol(col_vec(a), 3, 5), a), 0.0);
}

TEST(ColVec, UncolRejectsWrongLength) {
  EXPECT_QINSTR_ERROR(uncol(ComplexVector::Zero(5), 2, 3), ErrorKind::kDimensionMismatch);
}

TEST(ColVec, VectorizationIdentitiesOnRandomTriples) {
  Rng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = static_cast<Eigen::Index>(1 + rng.below(6));
    const auto m = static_cast<Eigen::Index>(1 + rng.below(6));
    const auto p = static_cast<Eigen::Index>(1 + rng.below(6));
    const auto q = static_cast<Eigen::Index>(1 + rng.below(6));
    const ComplexMatrix a = rng.ginibre(n, m);
    const ComplexMatrix b = rng.ginibre(m, p);
    const ComplexMatrix c = rng.ginibre(p, q);
    const ComplexVector lhs = col_vec(a * b * c);
    const ComplexVector rhs = testing::naive_kron(c.transpose(), a) * col_vec(b);
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);

    const ComplexMatrix x = rng.ginibre(n, m);
    const cplx ip = col_vec(x).dot(col_vec(a));  // conjugates the first argument
    EXPECT_LE(std::abs(ip - (x.adjoint() * a).trace()), 1e-12);
  }
}

TEST(Kron, IdentityTimesIdentity) { EXPECT_EQ(max_abs_diff(kron(identity(2), identity(2)), identity(4)), 0.0); }

TEST(Kron, DiagonalCase) {
  EXPECT_EQ(max_abs_diff(kron(diag({1, 2}), diag({3, 4})), diag({3, 4, 6, 8})), 0.0);
}

TEST(Kron, MatchesIndexLoop) {
  Rng rng(5);
  const ComplexMatrix a = rng.ginibre(2, 3);
  const ComplexMatrix b = rng.ginibre(4, 2);
  EXPECT_LE(max_abs_diff(kron(a, b), testing::naive_kron(a, b)), 1e-15);
  const ComplexMatrix c = rng.ginibre(2, 2);
  EXPECT_LE(max_abs_diff(kron({a, b, c}), kron(kron(a, b), c)), 1e-14);
}

TEST(TraceNorm, HermitianDiagonal) { EXPECT_NEAR(trace_norm(diag({1, -1})), 2.0, 1e-15); }

TEST(TraceNorm, DensityMatrixHasUnitNorm) {
  Rng rng(3);
  for (Eigen::Index n = 1; n <= 5; ++n) {
    const DensityMatrix rho(rng.density(n, n));
    EXPECT_NEAR(trace_norm(rho.matrix()), 1.0, 1e-12);
  }
}

TEST(TraceNorm, RandomMatrixMatchesEigenvaluesOfGram) {
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix a = rng.ginibre(4, 4);
    EXPECT_NEAR(trace_norm(a), testing::naive_trace_norm(a), 1e-10);
  }
}

TEST(TraceNorm, HermitianFastPathAgrees) {
  Rng rng(6);
  const ComplexMatrix h = rng.hermitian(5);
  EXPECT_NEAR(trace_norm_hermitian(h), trace_norm(h), 1e-12);
}

TEST(TraceNorm, MultiplicativeOverTensorProducts) {
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix a = rng.ginibre(2 + t % 3, 2);
    const ComplexMatrix b = rng.ginibre(3, 1 + t % 4);
    EXPECT_NEAR(trace_norm(kron(a, b)), trace_norm(a) * trace_norm(b), 1e-10);
  }
}

TEST(TraceNorm, EqualsTraceForPsd) {
  Rng rng(8);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix g = rng.ginibre(4, 3);
    const ComplexMatrix a = g * g.adjoint();
    EXPECT_NEAR(trace_norm(a), a.trace().real(), 1e-10);
  }
}

TEST(TraceNorm, TriangleInequalityAndUnitaryInvariance) {
  Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix a = rng.ginibre(3, 3);
    const ComplexMatrix b = rng.ginibre(3, 3);
    EXPECT_LE(trace_norm(a + b), trace_norm(a) + trace_norm(b) + 1e-12);
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Eigen::MatrixXcd(rng.ginibre(3, 3)));
    const ComplexMatrix u = qr.householderQ();
    EXPECT_NEAR(trace_norm(u * a * u.adjoint()), trace_norm(a), 1e-12);
  }
}

TEST(SpectralNorm, LargestSingularValue) { EXPECT_NEAR(spectral_norm(diag({1, -3, 2})), 3.0, 1e-14); }

TEST(NumericalRank, CountsSignificantSingularValues) {
  EXPECT_EQ(numerical_rank(diag({1, 0, 1e-12})), 1u);
  EXPECT_EQ(numerical_rank(diag({1, 1e-9, 0})), 2u);
  Rng rng(10);
  const ComplexMatrix g = rng.ginibre(5, 2);
  EXPECT_EQ(numerical_rank(g * g.adjoint()), 2u);
}

TEST(PsdSqrt, IdentityAndDiagonal) {
  EXPECT_LE(max_abs_diff(psd_sqrt(identity(3)), identity(3)), 1e-15);
  EXPECT_LE(max_abs_diff(psd_sqrt(diag({4, 9})), diag({2, 3})), 1e-14);
}

TEST(PsdSqrt, SquaresBackToInput) {
  Rng rng(12);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix c = rng.ginibre(4, 4);
    const ComplexMatrix a = c * c.adjoint();
    const ComplexMatrix b = psd_sqrt(a);
    EXPECT_LE((b * b - a).norm(), 1e-8);
  }
}

TEST(PsdSqrt, RecoversPsdRoot) {
  Rng rng(13);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix c = rng.ginibre(3, 3);
    const ComplexMatrix b = hermitian_part(c * c.adjoint());
    EXPECT_LE(max_abs_diff(psd_sqrt(hermitian_part(b * b)), b), 1e-7);
  }
}

TEST(PsdSqrt, ClampsTinyNegativeEigenvalues) {
  const ComplexMatrix a = diag({1.0, -1e-12});
  const ComplexMatrix b = psd_sqrt(a);
  EXPECT_NEAR(b(0, 0).real(), 1.0, 1e-15);
  EXPECT_EQ(b(1, 1), cplx(0.0));
}

TEST(PsdSqrt, RejectsNegativeAndNonHermitian) {
  EXPECT_QINSTR_ERROR(psd_sqrt(diag({1.0, -0.1})), ErrorKind::kNotPSD);
  ComplexMatrix a = identity(2);
  a(0, 1) = 0.5;
  EXPECT_QINSTR_ERROR(psd_sqrt(a), ErrorKind::kNotHermitian);
}

TEST(HermitianEigen, SymmetrizesInput) {
  ComplexMatrix a = diag({1.0, 2.0});
  a(0, 1) = 1e-13;  // asymmetry noise
  const HermitianEigen e = hermitian_eigen(a);
  EXPECT_LE(e.values(0), e.values(1));
  EXPECT_LE(max_abs_diff(e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint(), hermitian_part(a)),
            1e-14);
}

// Partial trace by summing over explicit multi-indices.
ComplexMatrix naive_partial_trace_tripartite(const ComplexMatrix& a, int d0, int d1, int d2, bool keep0, bool keep1,
                                             bool keep2) {
  const int k0 = keep0 ? d0 : 1, k1 = keep1 ? d1 : 1, k2 = keep2 ? d2 : 1;
  ComplexMatrix out = ComplexMatrix::Zero(k0 * k1 * k2, k0 * k1 * k2);
  for (int i0 = 0; i0 < d0; ++i0)
    for (int i1 = 0; i1 < d1; ++i1)
      for (int i2 = 0; i2 < d2; ++i2)
        for (int j0 = 0; j0 < d0; ++j0)
          for (int j1 = 0; j1 < d1; ++j1)
            for (int j2 = 0; j2 < d2; ++j2) {
              if ((!keep0 && i0 != j0) || (!keep1 && i1 != j1) || (!keep2 && i2 != j2)) continue;
              const int r = ((keep0 ? i0 : 0) * k1 + (keep1 ? i1 : 0)) * k2 + (keep2 ? i2 : 0);
              const int c = ((keep0 ? j0 : 0) * k1 + (keep1 ? j1 : 0)) * k2 + (keep2 ? j2 : 0);
              out(r, c) += a((i0 * d1 + i1) * d2 + i2, (j0 * d1 + j1) * d2 + j2);
            }
  return out;
}

TEST(PartialTrace, ProductStateKeepsFirstFactor) {
  Rng rng(14);
  const ComplexMatrix rho = rng.density(2, 2);
  const ComplexMatrix sigma = 3.0 * rng.density(3, 2);
  EXPECT_LE(max_abs_diff(partial_trace(kron(rho, sigma), {2, 3}, {0}), rho * sigma.trace()), 1e-14);
}

TEST(PartialTrace, MaximallyEntangledMarginals) {
  const ComplexMatrix phi = maximally_entangled(2);
  EXPECT_LE(max_abs_diff(partial_trace(phi, {2, 2}, {0}), identity(2) / 2.0), 1e-15);
  EXPECT_LE(max_abs_diff(partial_trace(phi, {2, 2}, {1}), identity(2) / 2.0), 1e-15);
}

TEST(PartialTrace, TripartiteAgreesWithIndexLoop) {
  Rng rng(15);
  const ComplexMatrix a = rng.ginibre(12, 12);
  for (int mask = 0; mask < 8; ++mask) {
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < 3; ++k)
      if (mask & (1 << k)) keep.push_back(k);
    const std::vector<std::size_t> dims{2, 3, 2};
    const ComplexMatrix got = partial_trace(a, dims, keep);
    const ComplexMatrix want = naive_partial_trace_tripartite(a, 2, 3, 2, mask & 1, mask & 2, mask & 4);
    EXPECT_LE(max_abs_diff(got, want), 1e-12) << "mask " << mask;
  }
}

TEST(PartialTrace, RejectsBadDims) {
  EXPECT_QINSTR_ERROR(partial_trace(identity(6), {2, 2}, {0}), ErrorKind::kDimensionMismatch);
  EXPECT_QINSTR_ERROR(partial_trace(identity(4), {2, 2}, {2}), ErrorKind::kDimensionMismatch);
}

TEST(OrthogonalBlocks, TraceNormIsAdditive) {
  Rng rng(16);
  for (int t = 0; t < 50; ++t) {
    const Eigen::Index d = 2 + t % 3, e = 1 + t % 3;
    ComplexMatrix sum = ComplexMatrix::Zero(d * e, d * e);
    double separate = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      const ComplexMatrix m = kron(rng.hermitian(e), ketbra(d, j, j));
      separate += trace_norm(m);
      sum += m;
    }
    EXPECT_NEAR(trace_norm(sum), separate, 1e-10);
  }
}

TEST(MakeMatrix, RowMajorAndValidated) {
  const std::vector<cplx> entries{1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  const ComplexMatrix m = make_matrix(2, 3, entries);
  EXPECT_EQ(m(0, 2), cplx(3.0));
  EXPECT_EQ(m(1, 0), cplx(4.0));
  EXPECT_QINSTR_ERROR(make_matrix(2, 2, entries), ErrorKind::kDimensionMismatch);
  EXPECT_QINSTR_ERROR(make_matrix(0, 6, entries), ErrorKind::kDimensionMismatch);
  const std::vector<cplx> bad{1.0, std::numeric_limits<double>::quiet_NaN()};
  EXPECT_QINSTR_ERROR(make_matrix(1, 2, bad), ErrorKind::kNonFinite);
  const std::vector<cplx> inf{cplx(0.0, std::numeric_limits<double>::infinity())};
  EXPECT_QINSTR_ERROR(make_matrix(1, 1, inf), ErrorKind::kNonFinite);
}

TEST(DensityMatrixType, AcceptsValidStates) {
  EXPECT_EQ(DensityMatrix::maximally_mixed(3).dim(), 3);
  ComplexVector psi(2);
  psi << 1.0, cplx(0.0, 1.0);
  const DensityMatrix rho = DensityMatrix::pure(psi);
  EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-15);
}

TEST(DensityMatrixType, RejectsInvalidStates) {
  EXPECT_QINSTR_ERROR(DensityMatrix(identity(2)), ErrorKind::kInvalidDensity);
  EXPECT_QINSTR_ERROR(DensityMatrix(diag({1.5, -0.5})), ErrorKind::kInvalidDensity);
  ComplexMatrix a = diag({0.5, 0.5});
  a(0, 1) = 0.1;
  EXPECT_QINSTR_ERROR(DensityMatrix{a}, ErrorKind::kNotHermitian);
  EXPECT_QINSTR_ERROR(DensityMatrix(ComplexMatrix::Zero(2, 3)), ErrorKind::kDimensionMismatch);
  ComplexMatrix nan = diag({1.0, 0.0});
  nan(1, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_QINSTR_ERROR(DensityMatrix{nan}, ErrorKind::kNonFinite);
}

TEST(DensityMatrixType, AcceptsBoundaryEigenvalueNoise) {
  EXPECT_NO_THROW(DensityMatrix(diag({1.0 + 5e-11, -5e-11})));
}

}  // namespace
}  // namespace qinstr
