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

#ifndef QINSTR_METRICS_HPP
#define QINSTR_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "qinstr/channels.hpp"
#include "qinstr/config.hpp"
#include "qinstr/instruments.hpp"
#include "qinstr/linalg.hpp"
#include "qinstr/rng.hpp"

// Diamond-distance conventions. Functions named *_diamond_* return the full
// norm ||Delta||_diamond unless their comment says otherwise; the two that
// return halved values are diamond_identity_stochastic (r = 1/2 ||T - I||)
// and uniform_diamond_exact (1/2 ||Theta(M) - M||).

namespace qinstr {

// ===========================================================================
// Process fidelity
// ===========================================================================

namespace detail {
/// L = V sqrt(Lambda) over the numerical support of a PSD matrix, so that
/// A = L L^dagger. Round-off eigenvalues are dropped rather than square-rooted.
inline ComplexMatrix support_factor(const ComplexMatrix& a, const Tolerances& tol) {
  const HermitianEigen e = psd_eigen(hermitian_part(a), tol);
  const double top = e.values.size() ? e.values.maxCoeff() : 0.0;
  const double cut = 64.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(a.rows()) * top;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < e.values.size(); ++i)
    if (e.values(i) > cut) keep.push_back(i);
  ComplexMatrix l(a.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    l.col(static_cast<Eigen::Index>(k)) = e.vectors.col(keep[k]) * std::sqrt(e.values(keep[k]));
  }
  return l;
}
}  // namespace detail

/// F(JA, JB) = || sqrt(JA) sqrt(JB) ||_1^2, evaluated as the squared trace
/// norm of L_A^dagger L_B with A = L_A L_A^dagger and B = L_B L_B^dagger on
/// their supports. Tiny negative eigenvalues are clamped.
inline double process_fidelity(const ChoiMatrix& ja, const ChoiMatrix& jb,
                               const Tolerances& tol = default_tolerances()) {
  if (ja.dim_in() != jb.dim_in() || ja.dim_out() != jb.dim_out()) {
    throw Error(ErrorKind::kDimensionMismatch, "process_fidelity of maps on different spaces");
  }
  const ComplexMatrix la = detail::support_factor(ja.matrix(), tol);
  const ComplexMatrix lb = detail::support_factor(jb.matrix(), tol);
  if (la.cols() == 0 || lb.cols() == 0) return 0.0;
  const double root = trace_norm(la.adjoint() * lb);
  return root * root;
}

namespace detail {
inline void check_same_shape(const InstrumentImplementation& a, const InstrumentImplementation& b) {
  if (a.D() != b.D() || a.E() != b.E()) {
    throw Error(ErrorKind::kDimensionMismatch, "instruments have different (D, E)");
  }
}
}  // namespace detail

/// (sum_j sqrt F(J(A_j), J(B_j)))^2.
inline double instrument_fidelity_branchwise(const InstrumentImplementation& a, const InstrumentImplementation& b) {
  detail::check_same_shape(a, b);
  double root = 0.0;
  for (Eigen::Index j = 0; j < a.D(); ++j) {
    root += std::sqrt(process_fidelity(choi_from_kraus(a.branch(j)), choi_from_kraus(b.branch(j))));
  }
  return root * root;
}

/// Process fidelity of the two full channels (outcome register included).
inline double instrument_fidelity_direct(const InstrumentImplementation& a, const InstrumentImplementation& b) {
  detail::check_same_shape(a, b);
  return process_fidelity(choi_from_kraus(full_channel(a)), choi_from_kraus(full_channel(b)));
}

/// nu_00 * lambda_00, read off the Choi matrix of T_{0,0}. Zero when the
/// table has no (0, 0) entry or nu_00 = 0.
inline double fidelity_uniform_closed(const UniformStochasticModel& model) {
  const StochasticChannel* t00 = model.find(0, 0);
  if (!t00) return 0.0;
  const NuLambda nl = nu_lambda(*t00);
  return nl.nu * nl.lambda;
}

/// ((1/D) sum_j sqrt(nu_{0,0,j} lambda_{0,0,j}))^2.
inline double fidelity_nonuniform_closed(const NonUniformStochasticModel& model) {
  double root = 0.0;
  for (Eigen::Index j = 0; j < model.D(); ++j) {
    if (const StochasticChannel* t = model.find(0, 0, j)) {
      const NuLambda nl = nu_lambda(*t);
      root += std::sqrt(std::max(0.0, nl.nu * nl.lambda));
    }
  }
  root /= static_cast<double>(model.D());
  return root * root;
}

// ===========================================================================
// Diamond distances with closed forms
// ===========================================================================

/// r(T) = 1/2 ||T - I||_diamond = (1 + nu)/2 - nu lambda (halved).
inline double diamond_identity_stochastic(const StochasticChannel& t) {
  const NuLambda nl = nu_lambda(t);
  return 0.5 * (1.0 + nl.nu) - nl.nu * nl.lambda;
}

/// The same quantity through the Choi route: (1 + ||J(T)||_1)/2 - F(J(T), J(I)).
inline double diamond_identity_stochastic_choi(const StochasticChannel& t) {
  const ChoiMatrix jt = choi_from_kraus(t.to_kraus());
  const ChoiMatrix ji = choi_from_kraus(identity_channel(t.dim()));
  return 0.5 * (1.0 + trace_norm(jt.matrix())) - process_fidelity(jt, ji);
}

/// 1/2 ||Theta(M) - M||_diamond = 1 - nu_00 lambda_00 for a uniform model (halved).
inline double uniform_diamond_exact(const UniformStochasticModel& model) {
  return 1.0 - fidelity_uniform_closed(model);
}

/// ||Theta(M) - M||_diamond = max_j 2 (1 - lambda_j) (full norm) for a model
/// whose only entries are outcome-dependent errors T_j at a = b = 0.
inline double nonuniform_outcome_diamond(const NonUniformStochasticModel& model,
                                         const Tolerances& tol = default_tolerances()) {
  double worst = 0.0;
  for (const auto& e : model.table()) {
    if (e.a != 0 || e.b != 0) {
      throw Error(ErrorKind::kInvalidModel, "outcome-dependent diamond formula needs a = b = 0 entries only");
    }
    const NuLambda nl = nu_lambda(e.channel);
    if (std::abs(nl.nu - 1.0) > tol.normalization) {
      throw Error(ErrorKind::kInvalidModel, "outcome-dependent errors must be trace-preserving");
    }
    worst = std::max(worst, 2.0 * (1.0 - nl.lambda));
  }
  return worst;
}

// ===========================================================================
// Bounds for general implementations
// ===========================================================================

/// 1 - tr M_j(sigma_j) + ||M_j(sigma_j) - sigma_j||_1 with
/// sigma_j = sigma (x) |j><j|, a lower bound on ||Delta||_diamond.
///
/// sigma may live on C^E or on a reference-extended C^F (x) C^E (reference
/// first); in the latter case the bound is evaluated for I_F (x) Theta(M),
/// which has the same diamond distance.
inline double instrument_diamond_lower(const InstrumentImplementation& impl, const DensityMatrix& sigma,
                                       Eigen::Index j) {
  const Eigen::Index e = impl.E(), d = impl.D();
  if (sigma.dim() % e != 0) {
    throw Error(ErrorKind::kDimensionMismatch, "sigma dimension must be a multiple of E");
  }
  if (j < 0 || j >= d) throw Error(ErrorKind::kDimensionMismatch, "outcome index out of range");
  const Eigen::Index ref = sigma.dim() / e;
  const KrausChannel mj = ref == 1 ? impl.branch(j) : extend_with_identity(impl.branch(j), ref);
  const ComplexMatrix sigma_j = kron(sigma.matrix(), ketbra(d, j, j));
  const ComplexMatrix mu = qinstr::apply(mj, sigma_j);
  return 1.0 - mu.trace().real() + trace_norm_hermitian(mu - sigma_j);
}

/// The maximally entangled state on C^E (x) C^E. For a stochastic T it
/// maximizes ||(I (x) T)(sigma) - sigma||_1, so it saturates the lower bound
/// for uniform models.
inline DensityMatrix stochastic_maximizing_state(Eigen::Index e) { return DensityMatrix(maximally_entangled(e)); }

struct LowerBoundOptions {
  int restarts = 16;
  std::uint64_t seed = 0;
  /// Reference dimension F of the candidate states; 0 means F = E.
  Eigen::Index reference_dim = 0;
};

/// Maximum of instrument_diamond_lower over every j and a candidate set of
/// states on C^F (x) C^E: maximally mixed, computational basis states, the
/// maximally entangled state (when F = E) and `restarts` Haar-random pure
/// states. Restart k draws from stream k of the seed, so the result is
/// nondecreasing in `restarts`.
inline double instrument_diamond_lower_max(const InstrumentImplementation& impl, const LowerBoundOptions& opt = {}) {
  const Eigen::Index e = impl.E();
  const Eigen::Index ref = opt.reference_dim > 0 ? opt.reference_dim : e;
  const Eigen::Index n = ref * e;
  const InstrumentImplementation ext = extend_with_reference(impl, ref);

  std::vector<DensityMatrix> candidates;
  candidates.push_back(DensityMatrix::maximally_mixed(n));
  for (Eigen::Index k = 0; k < n; ++k) candidates.push_back(DensityMatrix(ketbra(n, k, k)));
  if (ref == e) candidates.push_back(DensityMatrix(maximally_entangled(e)));
  const Rng root(opt.seed);
  for (int r = 0; r < opt.restarts; ++r) {
    Rng stream = root.split(static_cast<std::uint64_t>(r));
    candidates.push_back(DensityMatrix::pure(stream.pure_state(n)));
  }

  double best = 0.0;
  for (Eigen::Index j = 0; j < impl.D(); ++j) {
    for (const auto& s : candidates) best = std::max(best, instrument_diamond_lower(ext, s, j));
  }
  return best;
}

/// ||J(M_k) - J(ad_{pi_k})||_1 for every branch k.
inline std::vector<double> per_branch_trace_distances(const InstrumentImplementation& impl) {
  const InstrumentImplementation ideal = ideal_instrument(impl.D(), impl.E());
  std::vector<double> out;
  for (Eigen::Index k = 0; k < impl.D(); ++k) {
    const ChoiMatrix diff = choi_from_kraus(impl.branch(k)) - choi_from_kraus(ideal.branch(k));
    out.push_back(trace_norm_hermitian(diff.matrix()));
  }
  return out;
}

/// D E sum_k ||J(M_k) - J(ad_{pi_k})||_1, an upper bound on ||Delta||_diamond.
inline double instrument_diamond_upper(const InstrumentImplementation& impl) {
  double s = 0.0;
  for (double x : per_branch_trace_distances(impl)) s += x;
  return static_cast<double>(impl.D() * impl.E()) * s;
}

// ===========================================================================
// Fuchs-van de Graaf with a support projector
// ===========================================================================

struct FvgBounds {
  double lower = 0.0;   // 1 - tr(pi sigma)
  double middle = 0.0;  // 1/2 ||rho - sigma||_1
  double upper = 0.0;   // sqrt(1 - ||sqrt(rho) sqrt(sigma)||_1^2)
};

/// Projector onto the eigenvectors of rho with eigenvalue above `cutoff`.
inline ComplexMatrix support_projector(const ComplexMatrix& rho, double cutoff = default_tolerances().support) {
  const HermitianEigen e = hermitian_eigen(rho);
  ComplexMatrix p = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    if (e.values(i) > cutoff) p += e.vectors.col(i) * e.vectors.col(i).adjoint();
  }
  return p;
}

/// lower <= middle <= upper for any projector pi with pi rho = rho. pi
/// defaults to the support projector of rho.
inline FvgBounds fvg_bounds(const DensityMatrix& rho, const DensityMatrix& sigma,
                            const std::optional<ComplexMatrix>& projector = std::nullopt,
                            const Tolerances& tol = default_tolerances()) {
  if (rho.dim() != sigma.dim()) throw Error(ErrorKind::kDimensionMismatch, "fvg_bounds: states differ in dimension");
  const ComplexMatrix pi = projector ? *projector : support_projector(rho.matrix(), tol.support);
  if (pi.rows() != rho.dim() || pi.cols() != rho.dim()) {
    throw Error(ErrorKind::kDimensionMismatch, "projector has the wrong dimension");
  }
  if ((pi * rho.matrix() - rho.matrix()).cwiseAbs().maxCoeff() > tol.projector) {
    throw Error(ErrorKind::kInvalidProjector, "pi rho differs from rho");
  }
  if ((pi * pi - pi).cwiseAbs().maxCoeff() > tol.projector || hermitian_deviation(pi) > tol.projector) {
    throw Error(ErrorKind::kInvalidProjector, "pi is not an orthogonal projector");
  }
  FvgBounds b;
  b.lower = 1.0 - (pi * sigma.matrix()).trace().real();
  b.middle = 0.5 * trace_norm_hermitian(rho.matrix() - sigma.matrix());
  const double root = trace_norm(psd_sqrt(rho.matrix(), tol) * psd_sqrt(sigma.matrix(), tol));
  b.upper = std::sqrt(std::max(0.0, 1.0 - root * root));
  return b;
}

// ===========================================================================
// Reports
// ===========================================================================

/// Aggregated figures of merit. All diamond fields hold the full norm
/// ||Theta(M) - M||_diamond.
struct MetricsReport {
  double fidelity = 1.0;
  double diamond_lower = 0.0;
  double diamond_upper = 0.0;
  std::optional<double> diamond_exact;  // uniform stochastic models only
  std::optional<double> nu00;
  std::optional<double> lambda00;
  std::vector<double> per_branch_trace_distances;
};

struct ReportOptions {
  LowerBoundOptions lower;
};

namespace detail {
inline MetricsReport report_for_implementation(const InstrumentImplementation& impl, const ReportOptions& opt) {
  MetricsReport r;
  r.fidelity = instrument_fidelity_branchwise(ideal_instrument(impl.D(), impl.E()), impl);
  r.diamond_lower = instrument_diamond_lower_max(impl, opt.lower);
  r.per_branch_trace_distances = per_branch_trace_distances(impl);
  double s = 0.0;
  for (double x : r.per_branch_trace_distances) s += x;
  r.diamond_upper = static_cast<double>(impl.D() * impl.E()) * s;
  return r;
}
}  // namespace detail

inline MetricsReport build_report(const InstrumentImplementation& impl, const ReportOptions& opt = {}) {
  return detail::report_for_implementation(impl, opt);
}

inline MetricsReport build_report(const UniformStochasticModel& model, const ReportOptions& opt = {}) {
  MetricsReport r = detail::report_for_implementation(expand_uniform(model), opt);
  r.fidelity = fidelity_uniform_closed(model);
  r.diamond_exact = 2.0 * uniform_diamond_exact(model);
  if (const StochasticChannel* t00 = model.find(0, 0)) {
    const NuLambda nl = nu_lambda(*t00);
    r.nu00 = nl.nu;
    r.lambda00 = nl.lambda;
  } else {
    r.nu00 = 0.0;
    r.lambda00 = 1.0;
  }
  return r;
}

inline MetricsReport build_report(const NonUniformStochasticModel& model, const ReportOptions& opt = {}) {
  MetricsReport r = detail::report_for_implementation(expand_nonuniform(model), opt);
  r.fidelity = fidelity_nonuniform_closed(model);
  return r;
}

}  // namespace qinstr

#endif  // QINSTR_METRICS_HPP
