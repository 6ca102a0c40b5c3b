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

#ifndef QINSTR_SDP_HPP
#define QINSTR_SDP_HPP

// Dense primal-dual interior-point method for small block-diagonal complex
// semidefinite programs:
//
//   (P)  minimize   sum_k <C_k, X_k>
//        subject to sum_k <A_{k,i}, X_k> = b_i   (i = 1..m),   X_k >= 0
//
//   (D)  maximize   b^T y
//        subject to S_k = C_k - sum_i y_i A_{k,i} >= 0
//
// Every C_k and A_{k,i} is Hermitian and <A, B> = Re tr(A B). The search
// direction is HKM with Mehrotra predictor-corrector steps from an
// infeasible start at scaled identities. Constraint matrices are stored
// sparsely since the problems built here have one or two entries per A.

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qinstr/linalg.hpp"

namespace qinstr::sdp {

struct SparseEntry {
  int row = 0;
  int col = 0;
  cplx value;
};

/// Hermitian matrix sum_e value_e |row_e><col_e|. Both (r, c) and (c, r)
/// entries must be listed.
struct SparseHermitian {
  std::vector<SparseEntry> entries;
};

struct Block {
  int dim = 0;
  ComplexMatrix c;
  /// (variable index, A_{k,i}); variables that do not touch this block are
  /// omitted.
  std::vector<std::pair<int, SparseHermitian>> constraints;
};

struct Problem {
  int num_vars = 0;
  RealVector b;
  std::vector<Block> blocks;
};

struct Options {
  int max_iterations = 100;
  double gap_tol = 1e-9;
  double feasibility_tol = 1e-9;
  double step_fraction = 0.98;
};

struct Solution {
  std::vector<ComplexMatrix> x;
  std::vector<ComplexMatrix> s;
  RealVector y;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  bool converged = false;
};

namespace detail {

inline double inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  // Re tr(A B) for Hermitian A, B.
  return (a.array() * b.transpose().array()).sum().real();
}

inline double sparse_inner(const SparseHermitian& a, const ComplexMatrix& k) {
  double acc = 0.0;
  for (const auto& e : a.entries) acc += (e.value * k(e.col, e.row)).real();
  return acc;
}

inline void add_scaled(ComplexMatrix& out, const SparseHermitian& a, double s) {
  for (const auto& e : a.entries) out(e.row, e.col) += s * e.value;
}

/// Largest alpha with X + alpha dX >= 0 (infinity when dX >= 0).
inline double max_step(const ComplexMatrix& x, const ComplexMatrix& dx) {
  Eigen::LLT<Eigen::MatrixXcd> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  const Eigen::MatrixXcd l = llt.matrixL();
  const Eigen::MatrixXcd linv_dx = l.triangularView<Eigen::Lower>().solve(Eigen::MatrixXcd(dx));
  const Eigen::MatrixXcd q = l.triangularView<Eigen::Lower>().solve(Eigen::MatrixXcd(linv_dx.adjoint()));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (q + q.adjoint()), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  return lmin >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
}

inline ComplexMatrix hermitian_inverse(const ComplexMatrix& s) {
  Eigen::LLT<Eigen::MatrixXcd> llt(s);
  if (llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s);
    const RealVector inv = es.eigenvalues().cwiseMax(1e-300).cwiseInverse();
    return es.eigenvectors() * inv.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  }
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(s.rows(), s.cols());
  return llt.solve(id);
}

}  // namespace detail

/// A(X)_i = sum_k <A_{k,i}, X_k>.
inline RealVector apply_constraints(const Problem& p, const std::vector<ComplexMatrix>& x) {
  RealVector out = RealVector::Zero(p.num_vars);
  for (std::size_t k = 0; k < p.blocks.size(); ++k) {
    for (const auto& [i, a] : p.blocks[k].constraints) out(i) += detail::sparse_inner(a, x[k]);
  }
  return out;
}

/// A^T(y)_k = sum_i y_i A_{k,i}.
inline ComplexMatrix adjoint_constraints(const Block& blk, const RealVector& y) {
  ComplexMatrix out = ComplexMatrix::Zero(blk.dim, blk.dim);
  for (const auto& [i, a] : blk.constraints) detail::add_scaled(out, a, y(i));
  return out;
}

inline Solution solve(const Problem& p, const Options& opt = {}) {
  constexpr double kMinStep = 1e-12;
  constexpr int kStallIterations = 10;
  const int m = p.num_vars;
  const std::size_t nb = p.blocks.size();
  int total_dim = 0;
  double c_norm = 0.0;
  for (const auto& blk : p.blocks) {
    total_dim += blk.dim;
    c_norm = std::max(c_norm, blk.c.cwiseAbs().maxCoeff());
  }
  const double b_norm = p.b.size() ? p.b.cwiseAbs().maxCoeff() : 0.0;

  Solution sol;
  sol.y = RealVector::Zero(m);
  const double x0 = std::max(1.0, 10.0 * b_norm);
  const double s0 = std::max(1.0, 10.0 * c_norm);
  for (const auto& blk : p.blocks) {
    sol.x.push_back(x0 * identity(blk.dim));
    sol.s.push_back(s0 * identity(blk.dim));
  }

  // Best iterate by max(relative gap, infeasibilities); returned when the
  // iteration stalls or breaks down before reaching the tolerances.
  Solution best;
  double best_merit = std::numeric_limits<double>::infinity();
  int last_improvement = 0;

  for (int iter = 0; iter <= opt.max_iterations; ++iter) {
    sol.iterations = iter;
    // Residuals.
    const RealVector rp = p.b - apply_constraints(p, sol.x);
    std::vector<ComplexMatrix> rd(nb);
    double rd_norm = 0.0, gap = 0.0, pobj = 0.0;
    for (std::size_t k = 0; k < nb; ++k) {
      rd[k] = p.blocks[k].c - sol.s[k] - adjoint_constraints(p.blocks[k], sol.y);
      rd_norm = std::max(rd_norm, rd[k].cwiseAbs().maxCoeff());
      gap += detail::inner(sol.x[k], sol.s[k]);
      pobj += detail::inner(p.blocks[k].c, sol.x[k]);
    }
    const double dobj = p.b.dot(sol.y);
    sol.primal_objective = pobj;
    sol.dual_objective = dobj;
    sol.primal_infeasibility = (rp.size() ? rp.cwiseAbs().maxCoeff() : 0.0) / (1.0 + b_norm);
    sol.dual_infeasibility = rd_norm / (1.0 + c_norm);
    const double rel_gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    if (!std::isfinite(rel_gap + sol.primal_infeasibility + sol.dual_infeasibility + gap)) break;
    if (rel_gap < opt.gap_tol && sol.primal_infeasibility < opt.feasibility_tol &&
        sol.dual_infeasibility < opt.feasibility_tol) {
      sol.converged = true;
      return sol;
    }
    const double merit = std::max({rel_gap, sol.primal_infeasibility, sol.dual_infeasibility});
    if (merit < best_merit) {
      best_merit = merit;
      best = sol;
      last_improvement = iter;
    }
    if (iter == opt.max_iterations || gap <= 0.0 || iter - last_improvement > kStallIterations) break;

    const double mu = gap / total_dim;
    std::vector<ComplexMatrix> sinv(nb);
    for (std::size_t k = 0; k < nb; ++k) sinv[k] = detail::hermitian_inverse(sol.s[k]);

    // Schur complement M_ij = sum_k Re tr(A_{k,i} X_k A_{k,j} S_k^{-1}).
    Eigen::MatrixXd schur = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t k = 0; k < nb; ++k) {
      const auto& cons = p.blocks[k].constraints;
      const ComplexMatrix& x = sol.x[k];
      const ComplexMatrix& si = sinv[k];
      for (std::size_t u = 0; u < cons.size(); ++u) {
        const auto& [i, ai] = cons[u];
        for (std::size_t v = u; v < cons.size(); ++v) {
          const auto& [j, aj] = cons[v];
          double acc = 0.0;
          for (const auto& ei : ai.entries) {
            for (const auto& ej : aj.entries) {
              acc += (ei.value * x(ei.col, ej.row) * ej.value * si(ej.col, ei.row)).real();
            }
          }
          schur(i, j) += acc;
          if (i != j) schur(j, i) += acc;
        }
      }
    }
    // M is positive definite when the constraints are independent; LDLT is
    // the fallback for numerically singular M near the optimum.
    Eigen::LLT<Eigen::MatrixXd> chol(schur);
    const bool use_llt = chol.info() == Eigen::Success;
    Eigen::LDLT<Eigen::MatrixXd> ldlt;
    if (!use_llt) ldlt.compute(schur);

    // Solves for (dX, dy, dS) given the complementarity target `rc` (the
    // right-hand side of dX + sym(X dS S^{-1}) = rc before Rd is folded in).
    auto direction = [&](const std::vector<ComplexMatrix>& rc, std::vector<ComplexMatrix>& dx, RealVector& dy,
                         std::vector<ComplexMatrix>& ds) {
      std::vector<ComplexMatrix> full(nb);
      for (std::size_t k = 0; k < nb; ++k) full[k] = rc[k] - sol.x[k] * rd[k] * sinv[k];
      const RealVector rhs = rp - apply_constraints(p, full);
      dy = use_llt ? RealVector(chol.solve(rhs)) : RealVector(ldlt.solve(rhs));
      dx.resize(nb);
      ds.resize(nb);
      for (std::size_t k = 0; k < nb; ++k) {
        ds[k] = rd[k] - adjoint_constraints(p.blocks[k], dy);
        dx[k] = hermitian_part(rc[k] - sol.x[k] * ds[k] * sinv[k]);
      }
    };
    auto step_lengths = [&](const std::vector<ComplexMatrix>& dx, const std::vector<ComplexMatrix>& ds) {
      double ap = std::numeric_limits<double>::infinity(), ad = ap;
      for (std::size_t k = 0; k < nb; ++k) {
        ap = std::min(ap, detail::max_step(sol.x[k], dx[k]));
        ad = std::min(ad, detail::max_step(sol.s[k], ds[k]));
      }
      return std::pair(std::min(1.0, opt.step_fraction * ap), std::min(1.0, opt.step_fraction * ad));
    };

    // Predictor.
    std::vector<ComplexMatrix> rc(nb), dx, ds;
    RealVector dy;
    for (std::size_t k = 0; k < nb; ++k) rc[k] = -sol.x[k];
    direction(rc, dx, dy, ds);
    auto [ap, ad] = step_lengths(dx, ds);
    double next_gap = 0.0;
    for (std::size_t k = 0; k < nb; ++k) next_gap += detail::inner(sol.x[k] + ap * dx[k], sol.s[k] + ad * ds[k]);
    const double sigma = std::clamp(std::pow(std::max(next_gap, 0.0) / gap, 3.0), 0.0, 1.0);

    // Corrector with the second-order term.
    for (std::size_t k = 0; k < nb; ++k) {
      rc[k] = sigma * mu * sinv[k] - sol.x[k] - dx[k] * ds[k] * sinv[k];
    }
    direction(rc, dx, dy, ds);
    std::tie(ap, ad) = step_lengths(dx, ds);
    if (!(ap > kMinStep || ad > kMinStep)) break;

    for (std::size_t k = 0; k < nb; ++k) {
      sol.x[k] = hermitian_part(sol.x[k] + ap * dx[k]);
      sol.s[k] = hermitian_part(sol.s[k] + ad * ds[k]);
    }
    sol.y += ad * dy;
  }
  return best_merit < std::numeric_limits<double>::infinity() ? best : sol;
}

}  // namespace qinstr::sdp

#endif  // QINSTR_SDP_HPP
