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

#ifndef QINSTR_ORACLE_HPP
#define QINSTR_ORACLE_HPP

// Independent diamond-norm computations for Hermiticity-preserving maps.
// Nothing here uses the closed forms of metrics.hpp.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "qinstr/channels.hpp"
#include "qinstr/config.hpp"
#include "qinstr/linalg.hpp"
#include "qinstr/rng.hpp"
#include "qinstr/sdp.hpp"

namespace qinstr {

/// Largest Choi side accepted by the oracle.
inline constexpr Eigen::Index kMaxOracleSide = 144;

struct DiamondNormResult {
  double value = 0.0;
  double primal_bound = 0.0;  // certified lower bound
  double dual_bound = 0.0;    // certified upper bound
  double gap = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct OracleOptions {
  double tol = 1e-6;
  sdp::Options solver{};
};

namespace detail {

/// Unnormalized Choi operator C = dim_in * J.
inline ComplexMatrix unnormalized_choi(const ChoiMatrix& j) { return static_cast<double>(j.dim_in()) * j.matrix(); }

/// Partitions output levels into classes with no coupling between classes:
/// C[(i,o),(i',o')] = 0 whenever o and o' sit in different classes.
inline std::vector<std::vector<int>> output_classes(const ComplexMatrix& c, int din, int dout) {
  std::vector<int> parent(static_cast<std::size_t>(dout));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  const double cut = 1e-14 * std::max(1.0, c.cwiseAbs().maxCoeff());
  for (int o = 0; o < dout; ++o) {
    for (int o2 = o + 1; o2 < dout; ++o2) {
      bool coupled = false;
      for (int i = 0; i < din && !coupled; ++i)
        for (int i2 = 0; i2 < din && !coupled; ++i2)
          coupled = std::abs(c(i * dout + o, i2 * dout + o2)) > cut;
      if (coupled) parent[static_cast<std::size_t>(find(o))] = find(o2);
    }
  }
  std::vector<std::vector<int>> classes;
  std::vector<int> slot(static_cast<std::size_t>(dout), -1);
  for (int o = 0; o < dout; ++o) {
    const int r = find(o);
    if (slot[static_cast<std::size_t>(r)] < 0) {
      slot[static_cast<std::size_t>(r)] = static_cast<int>(classes.size());
      classes.emplace_back();
    }
    classes[static_cast<std::size_t>(slot[static_cast<std::size_t>(r)])].push_back(o);
  }
  return classes;
}

/// ||(R (x) I) C (R^dagger (x) I)||_1: the trace norm of (I (x) Phi)(psi psi^dagger)
/// for the purification psi = (R (x) I) sum_i |i>|i>, tr R R^dagger = 1.
inline double purified_output_norm(const ComplexMatrix& c, const ComplexMatrix& r, int dout) {
  const ComplexMatrix lift = kron(r, identity(dout));
  return trace_norm_hermitian(lift * c * lift.adjoint());
}

}  // namespace detail

/// Certified ||Delta||_diamond of the Hermiticity-preserving map with Choi
/// matrix `delta` (normalized as everywhere in the library).
///
/// Solves
///     minimize  || Tr_out Z ||_inf   subject to   Z >= C,  Z >= -C
/// with C = dim_in * J, the Hermitian reduction of the standard 2x2-block
/// diamond-norm SDP (Y_0 = Y_1 = Z). The dual variable of the trace
/// constraint is an input state rho, and every rho certifies the lower bound
/// ||(sqrt(rho) (x) I) C (sqrt(rho) (x) I)||_1. The upper bound comes from Z
/// shifted by the identity until it is exactly feasible. Output levels that
/// never couple in C are split into separate blocks.
inline DiamondNormResult diamond_norm(const ChoiMatrix& delta, const OracleOptions& opt = {}) {
  const int din = static_cast<int>(delta.dim_in());
  const int dout = static_cast<int>(delta.dim_out());
  if (delta.matrix().rows() > kMaxOracleSide) {
    throw Error(ErrorKind::kDimensionTooLarge, "Choi side " + std::to_string(delta.matrix().rows()) + " exceeds " +
                                                   std::to_string(kMaxOracleSide));
  }
  const ComplexMatrix c = hermitian_part(detail::unnormalized_choi(delta));
  const auto classes = detail::output_classes(c, din, dout);

  sdp::Problem prob;
  prob.num_vars = 1;  // variable 0 is t
  sdp::Block trace_block;
  trace_block.dim = din;
  trace_block.c = ComplexMatrix::Zero(din, din);
  {
    sdp::SparseHermitian minus_id;
    for (int i = 0; i < din; ++i) minus_id.entries.push_back({i, i, -1.0});
    trace_block.constraints.push_back({0, minus_id});
  }

  struct ClassLayout {
    std::vector<int> outputs;
    int first_var = 0;
    int dim = 0;
  };
  std::vector<ClassLayout> layouts;
  for (const auto& cls : classes) {
    ClassLayout lay;
    lay.outputs = cls;
    lay.dim = din * static_cast<int>(cls.size());
    lay.first_var = prob.num_vars;
    const int w = static_cast<int>(cls.size());
    auto global = [&](int local) { return (local / w) * dout + cls[static_cast<std::size_t>(local % w)]; };

    ComplexMatrix jc(lay.dim, lay.dim);
    for (int p = 0; p < lay.dim; ++p)
      for (int q = 0; q < lay.dim; ++q) jc(p, q) = c(global(p), global(q));

    sdp::Block minus_blk{lay.dim, -jc, {}};  // Z - C >= 0
    sdp::Block plus_blk{lay.dim, jc, {}};    // Z + C >= 0
    auto add_var = [&](const sdp::SparseHermitian& basis) {
      const int var = prob.num_vars++;
      sdp::SparseHermitian neg = basis;
      for (auto& e : neg.entries) e.value = -e.value;
      minus_blk.constraints.push_back({var, neg});
      plus_blk.constraints.push_back({var, neg});
      sdp::SparseHermitian traced;
      for (const auto& e : basis.entries) {
        if (e.row % w == e.col % w) traced.entries.push_back({e.row / w, e.col / w, e.value});
      }
      if (!traced.entries.empty()) trace_block.constraints.push_back({var, traced});
    };
    for (int p = 0; p < lay.dim; ++p) {
      add_var({{{p, p, 1.0}}});
      for (int q = p + 1; q < lay.dim; ++q) {
        add_var({{{p, q, 1.0}, {q, p, 1.0}}});
        add_var({{{p, q, cplx(0.0, 1.0)}, {q, p, cplx(0.0, -1.0)}}});
      }
    }
    prob.blocks.push_back(std::move(minus_blk));
    prob.blocks.push_back(std::move(plus_blk));
    layouts.push_back(std::move(lay));
  }
  prob.blocks.push_back(std::move(trace_block));
  prob.b = RealVector::Zero(prob.num_vars);
  prob.b(0) = -1.0;  // maximize -t

  const sdp::Solution sol = sdp::solve(prob, opt.solver);

  DiamondNormResult res;
  res.iterations = sol.iterations;

  // Upper bound: repair Z_c to exact feasibility, then ||Tr_out Z||_inf.
  ComplexMatrix traced = ComplexMatrix::Zero(din, din);
  for (std::size_t k = 0; k < layouts.size(); ++k) {
    const auto& lay = layouts[k];
    const int w = static_cast<int>(lay.outputs.size());
    ComplexMatrix z = -sdp::adjoint_constraints(prob.blocks[2 * k], sol.y);  // blocks carry -B_i
    const ComplexMatrix& jc = prob.blocks[2 * k + 1].c;
    const double shift = std::max({0.0, -hermitian_eigenvalues(z - jc)(0), -hermitian_eigenvalues(z + jc)(0)});
    z += shift * identity(lay.dim);
    for (int p = 0; p < lay.dim; ++p)
      for (int q = 0; q < lay.dim; ++q)
        if (p % w == q % w) traced(p / w, q / w) += z(p, q);
  }
  res.dual_bound = hermitian_eigenvalues(traced).maxCoeff();

  // Lower bound from the input state rho carried by the trace block.
  HermitianEigen rho_eig = hermitian_eigen(sol.x.back());
  rho_eig.values = rho_eig.values.cwiseMax(0.0);
  const double tr = rho_eig.values.sum();
  if (tr > 0.0) {
    const ComplexMatrix r =
        rho_eig.vectors * (rho_eig.values / tr).cwiseSqrt().cast<cplx>().asDiagonal() * rho_eig.vectors.adjoint();
    res.primal_bound = detail::purified_output_norm(c, r, dout);
  }
  res.primal_bound = std::min(res.primal_bound, res.dual_bound);
  res.gap = std::max(0.0, res.dual_bound - res.primal_bound);
  res.value = 0.5 * (res.primal_bound + res.dual_bound);
  res.converged = res.gap <= opt.tol;
  return res;
}

struct HillclimbOptions {
  int max_iterations = 500;
  double improvement_tol = 1e-13;
};

/// Lower bound on ||Delta||_diamond by local maximization of
/// ||(I (x) Delta)(psi psi^dagger)||_1 over pure states psi on C^din (x) C^din.
/// Each restart starts from a Haar-random psi drawn from stream k of the seed
/// and alternates between the sign of the output and the best psi for that
/// sign (a top eigenvector), which never decreases the objective.
inline double diamond_lower_hillclimb(const ChoiMatrix& delta, int restarts, std::uint64_t seed,
                                      const HillclimbOptions& opt = {}) {
  const int din = static_cast<int>(delta.dim_in());
  const int dout = static_cast<int>(delta.dim_out());
  const ComplexMatrix c = hermitian_part(detail::unnormalized_choi(delta));
  const Rng root(seed);
  double best = 0.0;
  for (int restart = 0; restart < restarts; ++restart) {
    Rng stream = root.split(static_cast<std::uint64_t>(restart));
    // psi = sum_{a,i} R_{a i} |a>|i>; R is din x din with ||R||_F = 1.
    ComplexMatrix r = uncol(stream.pure_state(din * din), din, din).transpose();
    double value = detail::purified_output_norm(c, r, dout);
    for (int it = 0; it < opt.max_iterations; ++it) {
      const ComplexMatrix lift = kron(r, identity(dout));
      const HermitianEigen h = hermitian_eigen(lift * c * lift.adjoint());
      // S = sign of the output operator, indexed ((b, o'), (a, o)).
      const ComplexMatrix sign = h.vectors * h.values.unaryExpr([](double x) { return x >= 0.0 ? 1.0 : -1.0; })
                                                  .cast<cplx>()
                                                  .asDiagonal() *
                                 h.vectors.adjoint();
      // tr(S H) = r^dagger K r with r_{(a,i)} = R_{a i} and
      // K_{(b,j),(a,i)} = sum_{o,o'} C_{(i,o),(j,o')} S_{(b,o'),(a,o)}.
      ComplexMatrix k = ComplexMatrix::Zero(din * din, din * din);
      for (int b = 0; b < din; ++b)
        for (int j = 0; j < din; ++j)
          for (int a = 0; a < din; ++a)
            for (int i = 0; i < din; ++i) {
              cplx acc = 0.0;
              for (int o = 0; o < dout; ++o)
                for (int o2 = 0; o2 < dout; ++o2) acc += c(i * dout + o, j * dout + o2) * sign(b * dout + o2, a * dout + o);
              k(b * din + j, a * din + i) = acc;
            }
      const HermitianEigen ke = hermitian_eigen(k);
      const ComplexVector top = ke.vectors.col(ke.vectors.cols() - 1);
      ComplexMatrix next(din, din);
      for (int a = 0; a < din; ++a)
        for (int i = 0; i < din; ++i) next(a, i) = top(a * din + i);
      const double next_value = detail::purified_output_norm(c, next, dout);
      if (next_value <= value + opt.improvement_tol) {
        value = std::max(value, next_value);
        break;
      }
      r = next;
      value = next_value;
    }
    best = std::max(best, value);
  }
  return best;
}

}  // namespace qinstr

#endif  // QINSTR_ORACLE_HPP
