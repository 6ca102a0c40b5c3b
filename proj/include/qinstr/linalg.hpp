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

#ifndef QINSTR_LINALG_HPP
#define QINSTR_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qinstr/config.hpp"

namespace qinstr {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major. Every operator, state, Choi matrix and
/// superoperator in the library is one of these.
using ComplexMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline void require_finite(const ComplexMatrix& a, std::string_view what = "matrix") {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const cplx z = a.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw Error(ErrorKind::kNonFinite, std::string(what) + " has a non-finite entry");
    }
  }
}

/// Builds a matrix from row-major entries; rejects a wrong entry count and
/// non-finite values.
inline ComplexMatrix make_matrix(std::size_t rows, std::size_t cols, std::span<const cplx> entries) {
  if (rows == 0 || cols == 0) {
    throw Error(ErrorKind::kDimensionMismatch, "matrix dimensions must be positive");
  }
  if (entries.size() != rows * cols) {
    throw Error(ErrorKind::kDimensionMismatch,
                "expected " + std::to_string(rows * cols) + " entries, got " + std::to_string(entries.size()));
  }
  ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::copy(entries.begin(), entries.end(), m.data());
  require_finite(m);
  return m;
}

inline ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

/// |j> as an n x 1 column.
inline ComplexMatrix ket(Eigen::Index n, Eigen::Index j) {
  ComplexMatrix k = ComplexMatrix::Zero(n, 1);
  k(j, 0) = 1.0;
  return k;
}

/// |i><j| on C^n.
inline ComplexMatrix ketbra(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
  ComplexMatrix k = ComplexMatrix::Zero(n, n);
  k(i, j) = 1.0;
  return k;
}

// ---------------------------------------------------------------------------
// Vectorization

/// Column-stacking vectorization: entry (r, c) lands at index c * rows + r.
inline ComplexVector col_vec(const ComplexMatrix& a) {
  ComplexVector v(a.size());
  const Eigen::Index rows = a.rows();
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) v(c * rows + r) = a(r, c);
  }
  return v;
}

inline ComplexMatrix uncol(const ComplexVector& v, Eigen::Index rows, Eigen::Index cols) {
  if (rows <= 0 || cols <= 0 || v.size() != rows * cols) {
    throw Error(ErrorKind::kDimensionMismatch, "uncol: vector length " + std::to_string(v.size()) +
                                                   " does not match " + std::to_string(rows) + "x" +
                                                   std::to_string(cols));
  }
  ComplexMatrix a(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) a(r, c) = v(c * rows + r);
  }
  return a;
}

/// Kronecker product; the left factor is the slow index so that
/// col(A B C) = kron(C^T, A) col(B).
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline ComplexMatrix kron(std::initializer_list<ComplexMatrix> factors) {
  ComplexMatrix out = ComplexMatrix::Ones(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

// ---------------------------------------------------------------------------
// Hermitian helpers

inline double hermitian_deviation(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const ComplexMatrix& a, double tol = default_tolerances().hermitian) {
  return a.rows() == a.cols() && hermitian_deviation(a) <= tol;
}

inline ComplexMatrix hermitian_part(const ComplexMatrix& a) { return 0.5 * (a + a.adjoint()); }

struct HermitianEigen {
  RealVector values;     // ascending
  ComplexMatrix vectors; // columns are eigenvectors
};

/// Eigendecomposition of the symmetrized input (A + A^dagger) / 2.
inline HermitianEigen hermitian_eigen(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::kDimensionMismatch, "eigendecomposition needs a square matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian_part(a));
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::kNotHermitian, "eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

inline RealVector hermitian_eigenvalues(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::kDimensionMismatch, "eigendecomposition needs a square matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian_part(a), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

inline RealVector singular_values(const ComplexMatrix& a) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  return svd.singularValues();
}

/// ||A||_1 = tr sqrt(A A^dagger), the sum of singular values.
inline double trace_norm(const ComplexMatrix& a) { return singular_values(a).sum(); }

/// Trace norm of a Hermitian matrix as the sum of absolute eigenvalues.
inline double trace_norm_hermitian(const ComplexMatrix& a) { return hermitian_eigenvalues(a).cwiseAbs().sum(); }

/// Largest singular value.
inline double spectral_norm(const ComplexMatrix& a) {
  const RealVector s = singular_values(a);
  return s.size() ? s(0) : 0.0;
}

/// Number of singular values above `rank_cutoff * sigma_max`.
inline std::size_t numerical_rank(const ComplexMatrix& a, const Tolerances& tol = default_tolerances()) {
  const RealVector s = singular_values(a);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cut = tol.rank_cutoff * s(0);
  return static_cast<std::size_t>((s.array() > cut).count());
}

inline double psd_clamp_threshold(const ComplexMatrix& a, const Tolerances& tol = default_tolerances()) {
  return tol.psd_clamp * std::max(1.0, spectral_norm(a));
}

/// Eigendecomposition of a Hermitian PSD matrix with eigenvalues in
/// [-eps_clamp, 0) clamped to zero. Throws NotHermitian / NotPSD.
inline HermitianEigen psd_eigen(const ComplexMatrix& a, const Tolerances& tol = default_tolerances()) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::kDimensionMismatch, "PSD operation needs a square matrix");
  if (hermitian_deviation(a) > tol.hermitian) {
    throw Error(ErrorKind::kNotHermitian, "deviation " + std::to_string(hermitian_deviation(a)));
  }
  HermitianEigen e = hermitian_eigen(a);
  const double eps = tol.psd_clamp * std::max(1.0, e.values.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    if (e.values(i) < -eps) {
      throw Error(ErrorKind::kNotPSD, "eigenvalue " + std::to_string(e.values(i)) + " below -" + std::to_string(eps));
    }
    e.values(i) = std::max(0.0, e.values(i));
  }
  return e;
}

/// The unique PSD square root.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& a, const Tolerances& tol = default_tolerances()) {
  const HermitianEigen e = psd_eigen(a, tol);
  const ComplexMatrix scaled = e.vectors * e.values.cwiseSqrt().cast<cplx>().asDiagonal();
  return scaled * e.vectors.adjoint();
}

// ---------------------------------------------------------------------------
// Partial trace

/// Traces out every tensor factor not listed in `keep`. Factor 0 is the
/// slowest index, matching kron.
inline ComplexMatrix partial_trace(const ComplexMatrix& a, std::span<const std::size_t> dims,
                                   std::span<const std::size_t> keep) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::kDimensionMismatch, "partial_trace needs a square matrix");
  if (dims.empty()) throw Error(ErrorKind::kDimensionMismatch, "partial_trace needs at least one factor");
  const std::size_t total = std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
  if (total != static_cast<std::size_t>(a.rows()) || std::find(dims.begin(), dims.end(), 0) != dims.end()) {
    throw Error(ErrorKind::kDimensionMismatch, "product of dims " + std::to_string(total) +
                                                   " does not match matrix side " + std::to_string(a.rows()));
  }
  const std::size_t n = dims.size();
  std::vector<bool> kept(n, false);
  for (std::size_t k : keep) {
    if (k >= n) throw Error(ErrorKind::kDimensionMismatch, "keep index out of range");
    kept[k] = true;
  }
  std::size_t kept_dim = 1, traced_dim = 1;
  for (std::size_t f = 0; f < n; ++f) (kept[f] ? kept_dim : traced_dim) *= dims[f];

  // Strides of each factor in the full index.
  std::vector<std::size_t> stride(n, 1);
  for (std::size_t f = n - 1; f-- > 0;) stride[f] = stride[f + 1] * dims[f + 1];

  // Map (kept multi-index, traced multi-index) to a full index.
  auto full_index = [&](std::size_t kept_idx, std::size_t traced_idx) {
    std::size_t out = 0;
    for (std::size_t f = n; f-- > 0;) {
      if (kept[f]) {
        out += (kept_idx % dims[f]) * stride[f];
        kept_idx /= dims[f];
      } else {
        out += (traced_idx % dims[f]) * stride[f];
        traced_idx /= dims[f];
      }
    }
    return out;
  };

  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(kept_dim), static_cast<Eigen::Index>(kept_dim));
  for (std::size_t r = 0; r < kept_dim; ++r) {
    for (std::size_t c = 0; c < kept_dim; ++c) {
      cplx acc = 0.0;
      for (std::size_t t = 0; t < traced_dim; ++t) {
        acc += a(static_cast<Eigen::Index>(full_index(r, t)), static_cast<Eigen::Index>(full_index(c, t)));
      }
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = acc;
    }
  }
  return out;
}

inline ComplexMatrix partial_trace(const ComplexMatrix& a, std::initializer_list<std::size_t> dims,
                                   std::initializer_list<std::size_t> keep) {
  return partial_trace(a, std::span<const std::size_t>(dims.begin(), dims.size()),
                       std::span<const std::size_t>(keep.begin(), keep.size()));
}

// ---------------------------------------------------------------------------
// Density matrices

/// A validated density operator: Hermitian, PSD and unit trace within the
/// configured tolerances.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m, const Tolerances& tol = default_tolerances()) : m_(std::move(m)) {
    require_finite(m_, "density matrix");
    if (m_.rows() != m_.cols() || m_.rows() == 0) {
      throw Error(ErrorKind::kDimensionMismatch, "density matrix must be square and non-empty");
    }
    if (hermitian_deviation(m_) > tol.hermitian) throw Error(ErrorKind::kNotHermitian, "density matrix");
    const double tr = m_.trace().real();
    if (std::abs(tr - 1.0) > tol.density_trace) {
      throw Error(ErrorKind::kInvalidDensity, "trace " + std::to_string(tr) + " differs from 1");
    }
    if (hermitian_eigenvalues(m_).minCoeff() < -tol.density_eigenvalue) {
      throw Error(ErrorKind::kInvalidDensity, "negative eigenvalue");
    }
  }

  static DensityMatrix pure(const ComplexVector& psi) {
    const ComplexVector unit = psi / psi.norm();
    return DensityMatrix(unit * unit.adjoint());
  }

  static DensityMatrix maximally_mixed(Eigen::Index dim) {
    return DensityMatrix(identity(dim) / static_cast<double>(dim));
  }

  Eigen::Index dim() const noexcept { return m_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return m_; }

 private:
  ComplexMatrix m_;
};

}  // namespace qinstr

#endif  // QINSTR_LINALG_HPP
