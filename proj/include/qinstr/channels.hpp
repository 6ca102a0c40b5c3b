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

#ifndef QINSTR_CHANNELS_HPP
#define QINSTR_CHANNELS_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qinstr/config.hpp"
#include "qinstr/linalg.hpp"
#include "qinstr/rng.hpp"

namespace qinstr {

// ===========================================================================
// Kraus and Choi representations
// ===========================================================================

/// Completely positive map rho -> sum_k K_k rho K_k^dagger from C^dim_in to
/// C^dim_out. Trace preservation is checked on demand.
class KrausChannel {
 public:
  KrausChannel(Eigen::Index dim_in, Eigen::Index dim_out, std::vector<ComplexMatrix> kraus)
      : dim_in_(dim_in), dim_out_(dim_out), kraus_(std::move(kraus)) {
    if (dim_in <= 0 || dim_out <= 0) throw Error(ErrorKind::kDimensionMismatch, "channel dimensions must be positive");
    for (const auto& k : kraus_) {
      if (k.rows() != dim_out || k.cols() != dim_in) {
        throw Error(ErrorKind::kDimensionMismatch, "Kraus operator is " + std::to_string(k.rows()) + "x" +
                                                       std::to_string(k.cols()) + ", expected " +
                                                       std::to_string(dim_out) + "x" + std::to_string(dim_in));
      }
      require_finite(k, "Kraus operator");
    }
  }

  Eigen::Index dim_in() const noexcept { return dim_in_; }
  Eigen::Index dim_out() const noexcept { return dim_out_; }
  const std::vector<ComplexMatrix>& kraus() const noexcept { return kraus_; }

  /// sum_k K_k^dagger K_k.
  ComplexMatrix kraus_gram() const {
    ComplexMatrix g = ComplexMatrix::Zero(dim_in_, dim_in_);
    for (const auto& k : kraus_) g += k.adjoint() * k;
    return g;
  }

  double trace_preservation_error() const { return (kraus_gram() - identity(dim_in_)).cwiseAbs().maxCoeff(); }

  bool is_trace_preserving(const Tolerances& tol = default_tolerances()) const {
    return trace_preservation_error() <= tol.trace_preserving;
  }

 private:
  Eigen::Index dim_in_;
  Eigen::Index dim_out_;
  std::vector<ComplexMatrix> kraus_;
};

/// Choi matrix J = (1/dim_in) sum_k col(K_k) col(K_k)^dagger on C^dim_in (x)
/// C^dim_out, input factor first. Hermitian; PSD only for CP maps, so it also
/// carries differences of channels.
class ChoiMatrix {
 public:
  ChoiMatrix(Eigen::Index dim_in, Eigen::Index dim_out, ComplexMatrix m, const Tolerances& tol = default_tolerances())
      : dim_in_(dim_in), dim_out_(dim_out), m_(std::move(m)) {
    if (dim_in <= 0 || dim_out <= 0) throw Error(ErrorKind::kDimensionMismatch, "Choi dimensions must be positive");
    if (m_.rows() != dim_in * dim_out || m_.cols() != dim_in * dim_out) {
      throw Error(ErrorKind::kDimensionMismatch, "Choi matrix side must be dim_in * dim_out");
    }
    require_finite(m_, "Choi matrix");
    const double dev = hermitian_deviation(m_);
    const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
    if (dev > tol.hermitian * scale) {
      throw Error(ErrorKind::kNotHermitian, "Choi matrix deviates by " + std::to_string(dev));
    }
  }

  Eigen::Index dim_in() const noexcept { return dim_in_; }
  Eigen::Index dim_out() const noexcept { return dim_out_; }
  const ComplexMatrix& matrix() const noexcept { return m_; }

  ChoiMatrix operator-(const ChoiMatrix& other) const {
    check_same(other);
    return {dim_in_, dim_out_, m_ - other.m_};
  }
  ChoiMatrix operator+(const ChoiMatrix& other) const {
    check_same(other);
    return {dim_in_, dim_out_, m_ + other.m_};
  }
  ChoiMatrix operator*(double c) const { return {dim_in_, dim_out_, c * m_}; }

 private:
  void check_same(const ChoiMatrix& other) const {
    if (other.dim_in_ != dim_in_ || other.dim_out_ != dim_out_) {
      throw Error(ErrorKind::kDimensionMismatch, "Choi matrices act on different spaces");
    }
  }

  Eigen::Index dim_in_;
  Eigen::Index dim_out_;
  ComplexMatrix m_;
};

inline ChoiMatrix choi_from_kraus(const KrausChannel& ch) {
  const Eigen::Index n = ch.dim_in() * ch.dim_out();
  ComplexMatrix j = ComplexMatrix::Zero(n, n);
  for (const auto& k : ch.kraus()) {
    const ComplexVector v = col_vec(k);
    j.noalias() += v * v.adjoint();
  }
  j /= static_cast<double>(ch.dim_in());
  return {ch.dim_in(), ch.dim_out(), hermitian_part(j)};
}

/// Minimal Kraus set from the eigendecomposition of J: one operator per
/// eigenvalue above the rank cutoff.
inline KrausChannel kraus_from_choi(const ChoiMatrix& j, const Tolerances& tol = default_tolerances()) {
  const HermitianEigen e = psd_eigen(j.matrix(), tol);
  const double top = e.values.size() ? e.values.maxCoeff() : 0.0;
  std::vector<ComplexMatrix> ops;
  for (Eigen::Index i = e.values.size(); i-- > 0;) {
    if (top <= 0.0 || e.values(i) <= tol.rank_cutoff * top) continue;
    const ComplexVector v = e.vectors.col(i) * std::sqrt(static_cast<double>(j.dim_in()) * e.values(i));
    ops.push_back(uncol(v, j.dim_out(), j.dim_in()));
  }
  return {j.dim_in(), j.dim_out(), std::move(ops)};
}

/// Kraus rank as the numerical rank of the Choi matrix.
inline std::size_t kraus_rank(const KrausChannel& ch, const Tolerances& tol = default_tolerances()) {
  return numerical_rank(choi_from_kraus(ch).matrix(), tol);
}

inline ComplexMatrix apply(const KrausChannel& ch, const ComplexMatrix& rho) {
  if (rho.rows() != ch.dim_in() || rho.cols() != ch.dim_in()) {
    throw Error(ErrorKind::kDimensionMismatch, "state is " + std::to_string(rho.rows()) + "x" +
                                                   std::to_string(rho.cols()) + ", channel input is " +
                                                   std::to_string(ch.dim_in()));
  }
  ComplexMatrix out = ComplexMatrix::Zero(ch.dim_out(), ch.dim_out());
  for (const auto& k : ch.kraus()) out.noalias() += k * rho * k.adjoint();
  return out;
}

/// Column-stacking superoperator sum_k conj(K_k) (x) K_k, so that
/// col(C(rho)) = S col(rho).
inline ComplexMatrix superoperator(const KrausChannel& ch) {
  const Eigen::Index n = ch.dim_out() * ch.dim_out();
  const Eigen::Index m = ch.dim_in() * ch.dim_in();
  ComplexMatrix s = ComplexMatrix::Zero(n, m);
  for (const auto& k : ch.kraus()) s += kron(k.conjugate(), k);
  return s;
}

/// Phi = (1/D) col(I_D) col(I_D)^dagger.
inline ComplexMatrix maximally_entangled(Eigen::Index dim) {
  if (dim < 1) throw Error(ErrorKind::kDimensionMismatch, "maximally_entangled needs dim >= 1");
  const ComplexVector v = col_vec(identity(dim));
  return (v * v.adjoint()) / static_cast<double>(dim);
}

inline KrausChannel identity_channel(Eigen::Index dim) { return {dim, dim, {identity(dim)}}; }

inline KrausChannel unitary_channel(const ComplexMatrix& u) { return {u.cols(), u.rows(), {u}}; }

/// c * ch for c >= 0.
inline KrausChannel scaled(const KrausChannel& ch, double c) {
  if (c < 0.0) throw Error(ErrorKind::kInvalidArgument, "CP maps can only be scaled by c >= 0");
  std::vector<ComplexMatrix> ops;
  ops.reserve(ch.kraus().size());
  for (const auto& k : ch.kraus()) ops.push_back(std::sqrt(c) * k);
  return {ch.dim_in(), ch.dim_out(), std::move(ops)};
}

/// I_ref (x) ch, reference factor first.
inline KrausChannel extend_with_identity(const KrausChannel& ch, Eigen::Index ref_dim) {
  std::vector<ComplexMatrix> ops;
  ops.reserve(ch.kraus().size());
  const ComplexMatrix id = identity(ref_dim);
  for (const auto& k : ch.kraus()) ops.push_back(kron(id, k));
  return {ref_dim * ch.dim_in(), ref_dim * ch.dim_out(), std::move(ops)};
}

/// Sum of CP maps with matching dimensions (Kraus sets concatenated).
inline KrausChannel channel_sum(const std::vector<KrausChannel>& parts) {
  if (parts.empty()) throw Error(ErrorKind::kInvalidArgument, "channel_sum of an empty list");
  std::vector<ComplexMatrix> ops;
  for (const auto& p : parts) {
    if (p.dim_in() != parts.front().dim_in() || p.dim_out() != parts.front().dim_out()) {
      throw Error(ErrorKind::kDimensionMismatch, "channel_sum over different spaces");
    }
    ops.insert(ops.end(), p.kraus().begin(), p.kraus().end());
  }
  return {parts.front().dim_in(), parts.front().dim_out(), std::move(ops)};
}

/// Random trace-preserving channel with `num_kraus` operators, built from a
/// Ginibre isometry G (G^dagger G)^{-1/2}. Generic draws have Kraus rank
/// min(num_kraus, dim_in * dim_out).
inline KrausChannel random_channel(Eigen::Index dim_in, Eigen::Index dim_out, Eigen::Index num_kraus, Rng& rng) {
  if (num_kraus * dim_out < dim_in) {
    throw Error(ErrorKind::kInvalidArgument, "num_kraus * dim_out must be at least dim_in");
  }
  const ComplexMatrix g = rng.ginibre(num_kraus * dim_out, dim_in);
  const ComplexMatrix gram = g.adjoint() * g;
  const HermitianEigen e = hermitian_eigen(gram);
  const ComplexMatrix inv_sqrt =
      e.vectors * e.values.cwiseSqrt().cwiseInverse().cast<cplx>().asDiagonal() * e.vectors.adjoint();
  const ComplexMatrix v = g * inv_sqrt;
  std::vector<ComplexMatrix> ops;
  for (Eigen::Index k = 0; k < num_kraus; ++k) ops.push_back(v.block(k * dim_out, 0, dim_out, dim_in));
  return {dim_in, dim_out, std::move(ops)};
}

// ===========================================================================
// Weyl-Heisenberg basis and stochastic channels
// ===========================================================================

/// Largest register dimension covered by the shipped Weyl basis.
inline constexpr Eigen::Index kMaxWeylDim = 4;

/// X^a Z^b with X|k> = |k+1 mod d> and Z|k> = omega^k |k>, omega = e^{2 pi i/d}.
inline ComplexMatrix weyl_operator(Eigen::Index dim, Eigen::Index a, Eigen::Index b) {
  ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double phase = 2.0 * std::numbers::pi * static_cast<double>((b * k) % dim) / static_cast<double>(dim);
    u((k + a) % dim, k) = std::polar(1.0, phase);
  }
  return u;
}

struct WeylIndex {
  Eigen::Index a = 0;
  Eigen::Index b = 0;
  friend bool operator==(const WeylIndex&, const WeylIndex&) = default;
};

/// One weighted unitary of a stochastic channel.
struct StochasticComponent {
  ComplexMatrix unitary;
  double weight = 0.0;
  std::optional<WeylIndex> label;  // set for Weyl-basis components
};

/// Unnormalized stochastic channel T = sum_k w_k ad_{U_k} with mutually
/// Hilbert-Schmidt-orthogonal unitaries and U_0 = I. The total weight nu may be
/// below 1 (trace-decreasing); lambda = w_0 / nu.
class StochasticChannel {
 public:
  /// Mixture over the Weyl basis of C^dim; (0, 0) is the identity.
  static StochasticChannel weyl(Eigen::Index dim, const std::vector<std::pair<WeylIndex, double>>& weights,
                                const Tolerances& tol = default_tolerances()) {
    if (dim < 1 || dim > kMaxWeylDim) {
      throw Error(ErrorKind::kUnsupportedDimension, "Weyl basis shipped for dims 1.." + std::to_string(kMaxWeylDim) +
                                                        ", got " + std::to_string(dim));
    }
    std::vector<double> dense(static_cast<std::size_t>(dim * dim), 0.0);
    std::vector<bool> seen(dense.size(), false);
    for (const auto& [idx, w] : weights) {
      if (idx.a < 0 || idx.a >= dim || idx.b < 0 || idx.b >= dim) {
        throw Error(ErrorKind::kInvalidChannel, "Weyl index out of range");
      }
      const auto flat = static_cast<std::size_t>(idx.a * dim + idx.b);
      if (seen[flat]) throw Error(ErrorKind::kInvalidChannel, "duplicate Weyl index");
      seen[flat] = true;
      dense[flat] = w;
    }
    std::vector<StochasticComponent> comps;
    for (Eigen::Index a = 0; a < dim; ++a) {
      for (Eigen::Index b = 0; b < dim; ++b) {
        comps.push_back({weyl_operator(dim, a, b), dense[static_cast<std::size_t>(a * dim + b)], WeylIndex{a, b}});
      }
    }
    return StochasticChannel(dim, std::move(comps), tol);
  }

  /// Dense weight vector in lexicographic (a, b) order.
  static StochasticChannel weyl(Eigen::Index dim, const std::vector<double>& dense,
                                const Tolerances& tol = default_tolerances()) {
    if (static_cast<Eigen::Index>(dense.size()) != dim * dim) {
      throw Error(ErrorKind::kInvalidChannel, "expected dim^2 weights");
    }
    std::vector<std::pair<WeylIndex, double>> w;
    for (Eigen::Index a = 0; a < dim; ++a)
      for (Eigen::Index b = 0; b < dim; ++b) w.push_back({{a, b}, dense[static_cast<std::size_t>(a * dim + b)]});
    return weyl(dim, w, tol);
  }

  /// General path: any weighted set of orthogonal unitaries whose first
  /// element is the identity. Validates every invariant.
  static StochasticChannel from_unitaries(Eigen::Index dim, const std::vector<ComplexMatrix>& unitaries,
                                          const std::vector<double>& weights,
                                          const Tolerances& tol = default_tolerances()) {
    if (unitaries.size() != weights.size() || unitaries.empty()) {
      throw Error(ErrorKind::kInvalidChannel, "need one weight per unitary and at least one unitary");
    }
    std::vector<StochasticComponent> comps;
    for (std::size_t k = 0; k < unitaries.size(); ++k) comps.push_back({unitaries[k], weights[k], std::nullopt});
    return StochasticChannel(dim, std::move(comps), tol);
  }

  Eigen::Index dim() const noexcept { return dim_; }
  const std::vector<StochasticComponent>& components() const noexcept { return comps_; }

  double nu() const {
    double s = 0.0;
    for (const auto& c : comps_) s += c.weight;
    return s;
  }
  double identity_weight() const { return comps_.front().weight; }
  double lambda() const {
    const double n = nu();
    return n > 0.0 ? identity_weight() / n : 1.0;
  }
  bool all_weyl() const {
    for (const auto& c : comps_)
      if (!c.label) return false;
    return true;
  }

  /// Kraus operators sqrt(w_k) U_k for the nonzero weights.
  KrausChannel to_kraus() const {
    std::vector<ComplexMatrix> ops;
    for (const auto& c : comps_) {
      if (c.weight > 0.0) ops.push_back(std::sqrt(c.weight) * c.unitary);
    }
    return {dim_, dim_, std::move(ops)};
  }

 private:
  StochasticChannel(Eigen::Index dim, std::vector<StochasticComponent> comps, const Tolerances& tol)
      : dim_(dim), comps_(std::move(comps)) {
    if (dim < 1) throw Error(ErrorKind::kDimensionMismatch, "stochastic channel dim must be positive");
    for (const auto& c : comps_) {
      if (c.unitary.rows() != dim || c.unitary.cols() != dim) {
        throw Error(ErrorKind::kDimensionMismatch, "stochastic component has wrong size");
      }
      require_finite(c.unitary, "stochastic unitary");
      if (!std::isfinite(c.weight) || c.weight < 0.0) {
        throw Error(ErrorKind::kInvalidChannel, "weights must be finite and nonnegative");
      }
    }
    if ((comps_.front().unitary - identity(dim)).cwiseAbs().maxCoeff() > tol.orthogonality) {
      throw Error(ErrorKind::kInvalidChannel, "first stochastic component must be the identity");
    }
    const double d = static_cast<double>(dim);
    for (std::size_t j = 0; j < comps_.size(); ++j) {
      for (std::size_t k = j; k < comps_.size(); ++k) {
        const cplx ip = (comps_[j].unitary.adjoint() * comps_[k].unitary).trace();
        const double want = j == k ? d : 0.0;
        if (std::abs(ip - want) > tol.orthogonality * d) {
          throw Error(ErrorKind::kInvalidChannel, "unitaries are not Hilbert-Schmidt orthogonal");
        }
      }
    }
    if (nu() > 1.0 + tol.normalization) throw Error(ErrorKind::kInvalidChannel, "total weight exceeds 1");
  }

  Eigen::Index dim_;
  std::vector<StochasticComponent> comps_;
};

/// Draws Dirichlet(concentration) weights over the dim^2 Weyl unitaries and
/// scales them by nu. Deterministic for a fixed seed.
inline StochasticChannel random_stochastic_channel(Eigen::Index dim, double nu, std::uint64_t seed,
                                                   double concentration = 1.0) {
  if (dim < 1 || dim > kMaxWeylDim) {
    throw Error(ErrorKind::kUnsupportedDimension, "no Weyl basis shipped for dim " + std::to_string(dim));
  }
  if (!(nu >= 0.0 && nu <= 1.0)) throw Error(ErrorKind::kInvalidArgument, "nu must lie in [0, 1]");
  if (!(concentration > 0.0)) throw Error(ErrorKind::kInvalidArgument, "concentration must be positive");
  Rng rng(seed);
  std::vector<double> w = rng.dirichlet(static_cast<std::size_t>(dim * dim), concentration);
  for (auto& x : w) x *= nu;
  return StochasticChannel::weyl(dim, w);
}

/// Stochastic channel with total weight nu and identity fraction lambda; the
/// remaining weight is Dirichlet-distributed over the non-identity Weyl
/// unitaries.
inline StochasticChannel random_stochastic_with_lambda(Eigen::Index dim, double nu, double lambda, Rng& rng,
                                                       double concentration = 1.0) {
  if (dim < 1 || dim > kMaxWeylDim) {
    throw Error(ErrorKind::kUnsupportedDimension, "no Weyl basis shipped for dim " + std::to_string(dim));
  }
  std::vector<double> w(static_cast<std::size_t>(dim * dim), 0.0);
  if (dim == 1) {
    w[0] = nu;
  } else {
    w[0] = nu * lambda;
    const auto rest = rng.dirichlet(w.size() - 1, concentration);
    for (std::size_t k = 1; k < w.size(); ++k) w[k] = nu * (1.0 - lambda) * rest[k - 1];
  }
  return StochasticChannel::weyl(dim, w);
}

struct NuLambda {
  double nu = 0.0;
  double lambda = 1.0;
};

/// Extracts (nu, lambda) from the Choi matrix alone: nu = tr J and
/// nu * lambda = (1/E) col(I)^dagger J col(I). lambda = 1 when nu = 0.
inline NuLambda nu_lambda(const ChoiMatrix& j) {
  const Eigen::Index e = j.dim_in();
  const ComplexVector v = col_vec(identity(e));
  const double nu = j.matrix().trace().real();
  const double nl = (v.adjoint() * j.matrix() * v)(0).real() / static_cast<double>(e);
  return {nu, nu > 0.0 ? nl / nu : 1.0};
}

inline NuLambda nu_lambda(const StochasticChannel& ch) { return nu_lambda(choi_from_kraus(ch.to_kraus())); }

}  // namespace qinstr

#endif  // QINSTR_CHANNELS_HPP
