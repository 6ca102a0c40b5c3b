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

#include "test_util.hpp"

#include "qinstr/sdp.hpp"

namespace qinstr {
namespace {

sdp::SparseHermitian sparse_identity(int n) {
  sdp::SparseHermitian a;
  for (int i = 0; i < n; ++i) a.entries.push_back({i, i, 1.0});
  return a;
}

/// min <-H, X> subject to tr X = 1, X >= 0; the optimum is -lambda_max(H).
sdp::Problem largest_eigenvalue_problem(const ComplexMatrix& h) {
  const int n = static_cast<int>(h.rows());
  sdp::Problem p;
  p.num_vars = 1;
  p.b = RealVector::Ones(1);
  sdp::Block blk;
  blk.dim = n;
  blk.c = -h;
  blk.constraints.push_back({0, sparse_identity(n)});
  p.blocks.push_back(blk);
  return p;
}

TEST(Sdp, LargestEigenvalue) {
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const Eigen::Index n = 2 + t % 6;
    const ComplexMatrix h = rng.hermitian(n);
    const sdp::Solution s = sdp::solve(largest_eigenvalue_problem(h));
    ASSERT_TRUE(s.converged);
    const double lmax = hermitian_eigenvalues(h).maxCoeff();
    EXPECT_NEAR(s.primal_objective, -lmax, 1e-7);
    EXPECT_NEAR(s.dual_objective, -lmax, 1e-7);
    EXPECT_NEAR(s.y(0), -lmax, 1e-7);
    EXPECT_NEAR(s.x[0].trace().real(), 1.0, 1e-8);
  }
}

TEST(Sdp, DiagonalBlocksFormAnLinearProgram) {
  // min x1 + 2 x2 subject to x1 + x2 = 1, x >= 0.
  sdp::Problem p;
  p.num_vars = 1;
  p.b = RealVector::Ones(1);
  for (double cost : {1.0, 2.0}) {
    sdp::Block blk;
    blk.dim = 1;
    blk.c = ComplexMatrix::Constant(1, 1, cost);
    blk.constraints.push_back({0, sparse_identity(1)});
    p.blocks.push_back(blk);
  }
  const sdp::Solution s = sdp::solve(p);
  ASSERT_TRUE(s.converged);
  EXPECT_NEAR(s.primal_objective, 1.0, 1e-7);
  EXPECT_NEAR(s.x[0](0, 0).real(), 1.0, 1e-6);
  EXPECT_NEAR(s.x[1](0, 0).real(), 0.0, 1e-6);
}

TEST(Sdp, OffDiagonalConstraint) {
  // min tr X subject to Re X_01 = 1, X >= 0; optimum 2 at X = [[1, 1], [1, 1]].
  sdp::Problem p;
  p.num_vars = 1;
  p.b = RealVector::Ones(1);
  sdp::Block blk;
  blk.dim = 2;
  blk.c = identity(2);
  sdp::SparseHermitian a;
  a.entries = {{0, 1, 0.5}, {1, 0, 0.5}};
  blk.constraints.push_back({0, a});
  p.blocks.push_back(blk);
  const sdp::Solution s = sdp::solve(p);
  ASSERT_TRUE(s.converged);
  EXPECT_NEAR(s.primal_objective, 2.0, 1e-7);
  EXPECT_NEAR(s.x[0](0, 1).real(), 1.0, 1e-6);
}

TEST(Sdp, ComplexConstraint) {
  // min tr X subject to Im X_01 = 1; the optimum 2 needs a complex X.
  sdp::Problem p;
  p.num_vars = 1;
  p.b = RealVector::Ones(1);
  sdp::Block blk;
  blk.dim = 2;
  blk.c = identity(2);
  sdp::SparseHermitian a;
  a.entries = {{0, 1, cplx(0.0, 0.5)}, {1, 0, cplx(0.0, -0.5)}};
  blk.constraints.push_back({0, a});
  p.blocks.push_back(blk);
  const sdp::Solution s = sdp::solve(p);
  ASSERT_TRUE(s.converged);
  EXPECT_NEAR(s.primal_objective, 2.0, 1e-7);
  EXPECT_NEAR(std::abs(s.x[0](0, 1)), 1.0, 1e-6);
}

TEST(Sdp, ConstraintOperatorsAreAdjoint) {
  Rng rng(2);
  const ComplexMatrix h = rng.hermitian(4);
  const sdp::Problem p = largest_eigenvalue_problem(h);
  const ComplexMatrix x = rng.density(4, 4);
  RealVector y(1);
  y << 0.7;
  const double lhs = sdp::apply_constraints(p, {x}).dot(y);
  const ComplexMatrix aty = sdp::adjoint_constraints(p.blocks[0], y);
  EXPECT_NEAR(lhs, (aty * x).trace().real(), 1e-12);
}

}  // namespace
}  // namespace qinstr
