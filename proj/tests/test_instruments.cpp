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
#include <numeric>
#include <vector>

#include "test_util.hpp"

namespace qinstr {
namespace {

using testing::max_abs_diff;

StochasticChannel weights(Eigen::Index e, std::vector<double> w) { return StochasticChannel::weyl(e, w); }

StochasticChannel scalar(double nu) { return weights(1, {nu}); }

/// D = 2, E = 1: branch j sees |j> with weight 0.8 and |j+1> with weight 0.2.
UniformStochasticModel readout_flip() { return {2, 1, {{0, 0, scalar(0.8)}, {1, 1, scalar(0.2)}}}; }

TEST(SubsystemMeasurementType, ProjectorsResolveIdentity) {
  for (Eigen::Index d = 2; d <= 4; ++d)
    for (Eigen::Index e = 1; e <= 3; ++e) {
      const SubsystemMeasurement m(d, e);
      ComplexMatrix sum = ComplexMatrix::Zero(d * e, d * e);
      for (Eigen::Index j = 0; j < d; ++j) {
        sum += m.projector(j);
        for (Eigen::Index k = 0; k < d; ++k) {
          const ComplexMatrix prod = m.projector(j) * m.projector(k);
          EXPECT_EQ(max_abs_diff(prod, j == k ? m.projector(j) : ComplexMatrix::Zero(d * e, d * e)), 0.0);
        }
      }
      EXPECT_EQ(max_abs_diff(sum, identity(d * e)), 0.0);
    }
}

TEST(SubsystemMeasurementType, RejectsBadDimensions) {
  EXPECT_QINSTR_ERROR(SubsystemMeasurement(1, 2), ErrorKind::kDimensionMismatch);
  EXPECT_QINSTR_ERROR(SubsystemMeasurement(2, 0), ErrorKind::kDimensionMismatch);
}

TEST(IdealInstrument, QubitReadoutBranches) {
  const InstrumentImplementation ideal = ideal_instrument(2, 1);
  for (Eigen::Index j = 0; j < 2; ++j) {
    ASSERT_EQ(ideal.branch(j).kraus().size(), 1u);
    EXPECT_EQ(max_abs_diff(ideal.branch(j).kraus()[0], ketbra(2, j, j)), 0.0);
  }
}

TEST(IdealInstrument, BranchChoiTraceIsOneOverD) {
  for (Eigen::Index d = 2; d <= 3; ++d)
    for (Eigen::Index e = 1; e <= 3; ++e) {
      const InstrumentImplementation ideal = ideal_instrument(d, e);
      for (Eigen::Index j = 0; j < d; ++j) {
        EXPECT_NEAR(choi_from_kraus(ideal.branch(j)).matrix().trace().real(), 1.0 / static_cast<double>(d), 1e-14);
      }
    }
}

TEST(IdealInstrument, TotalMapPreservesTrace) {
  Rng rng(1);
  const InstrumentImplementation ideal = ideal_instrument(3, 2);
  const ComplexMatrix rho = rng.density(6, 3);
  double total = 0.0;
  for (const auto& b : ideal.branches()) total += qinstr::apply(b, rho).trace().real();
  EXPECT_NEAR(total, 1.0, 1e-14);
}

TEST(InstrumentImplementationType, Validation) {
  EXPECT_QINSTR_ERROR(InstrumentImplementation(2, 1, {identity_channel(2)}), ErrorKind::kInvalidModel);
  EXPECT_QINSTR_ERROR(InstrumentImplementation(2, 1, {identity_channel(2), identity_channel(2)}),
                      ErrorKind::kInvalidModel);
  EXPECT_QINSTR_ERROR(InstrumentImplementation(2, 1, {identity_channel(3), identity_channel(3)}),
                      ErrorKind::kDimensionMismatch);
}

TEST(ExpandUniform, PerfectModelIsIdeal) {
  for (Eigen::Index e = 1; e <= 3; ++e) {
    std::vector<double> w(static_cast<std::size_t>(e * e), 0.0);
    w[0] = 1.0;
    const UniformStochasticModel m(3, e, {{0, 0, weights(e, w)}});
    const InstrumentImplementation impl = expand_uniform(m);
    const InstrumentImplementation ideal = ideal_instrument(3, e);
    for (Eigen::Index j = 0; j < 3; ++j) {
      EXPECT_LE(max_abs_diff(choi_from_kraus(impl.branch(j)).matrix(), choi_from_kraus(ideal.branch(j)).matrix()),
                1e-15);
    }
  }
}

TEST(ExpandUniform, ReadoutFlipOnBasisStates) {
  const InstrumentImplementation impl = expand_uniform(readout_flip());
  for (Eigen::Index j = 0; j < 2; ++j) {
    const ComplexMatrix on_j = qinstr::apply(impl.branch(j), ketbra(2, j, j));
    const ComplexMatrix on_other = qinstr::apply(impl.branch(j), ketbra(2, 1 - j, 1 - j));
    EXPECT_NEAR(on_j.trace().real(), 0.8, 1e-15);
    EXPECT_NEAR(on_other.trace().real(), 0.2, 1e-15);
    // Post-measurement states stay in the basis state that was prepared.
    EXPECT_LE(max_abs_diff(on_other, 0.2 * ketbra(2, 1 - j, 1 - j)), 1e-15);
  }
}

TEST(ExpandUniform, RandomModelsPreserveTrace) {
  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    const Eigen::Index d = 2 + t % 2, e = 1 + t % 3;
    const InstrumentImplementation impl = expand_uniform(random_uniform_model(d, e, rng));
    for (int s = 0; s < 5; ++s) {
      const ComplexMatrix rho = rng.density(d * e, 1 + s % (d * e));
      double total = 0.0;
      for (const auto& b : impl.branches()) total += qinstr::apply(b, rho).trace().real();
      EXPECT_NEAR(total, 1.0, 1e-12);
    }
  }
}

TEST(UniformModel, Validation) {
  EXPECT_QINSTR_ERROR(UniformStochasticModel(2, 1, {{0, 0, scalar(0.8)}}), ErrorKind::kInvalidModel);
  EXPECT_QINSTR_ERROR(UniformStochasticModel(2, 1, {{0, 0, scalar(0.5)}, {0, 0, scalar(0.5)}}),
                      ErrorKind::kInvalidModel);
  EXPECT_QINSTR_ERROR(UniformStochasticModel(2, 1, {{0, 2, scalar(1.0)}}), ErrorKind::kInvalidModel);
  EXPECT_QINSTR_ERROR(UniformStochasticModel(2, 2, {{0, 0, scalar(1.0)}}), ErrorKind::kInvalidModel);
  const UniformStochasticModel m = readout_flip();
  EXPECT_NEAR(m.nu(0, 0), 0.8, 1e-15);
  EXPECT_EQ(m.nu(0, 1), 0.0);
  EXPECT_EQ(m.find(1, 0), nullptr);
}

TEST(NonUniformModel, NormalizationIsPerInputLevel) {
  // Outcome-dependent: every input k reaches branch k only.
  EXPECT_NO_THROW(outcome_dependent_example());
  // Both entries are fed by input level 1; input 0 is lost.
  EXPECT_QINSTR_ERROR(NonUniformStochasticModel(2, 1, {{0, 1, 0, scalar(1.0)}, {0, 0, 1, scalar(1.0)}}),
                      ErrorKind::kInvalidModel);
  // Every input is sent to outcome 0, the other branch is empty.
  const NonUniformStochasticModel stuck(2, 1, {{0, 0, 0, scalar(1.0)}, {0, 1, 0, scalar(1.0)}});
  const InstrumentImplementation impl = expand_nonuniform(stuck);
  EXPECT_TRUE(impl.branch(1).kraus().empty());
}

TEST(ExpandNonUniform, ConstantTableMatchesUniform) {
  Rng rng(3);
  const UniformStochasticModel u = random_uniform_model(3, 2, rng);
  const InstrumentImplementation a = expand_uniform(u);
  const InstrumentImplementation b = expand_nonuniform(NonUniformStochasticModel::from_uniform(u));
  for (Eigen::Index j = 0; j < 3; ++j) {
    EXPECT_LE(max_abs_diff(choi_from_kraus(a.branch(j)).matrix(), choi_from_kraus(b.branch(j)).matrix()), 1e-15);
  }
}

TEST(ExpandNonUniform, OutcomeDependentBranchStructure) {
  const NonUniformStochasticModel m = outcome_dependent_example();
  const InstrumentImplementation impl = expand_nonuniform(m);
  for (Eigen::Index j = 0; j < 2; ++j) {
    const StochasticChannel* t = m.find(0, 0, j);
    ASSERT_NE(t, nullptr);
    std::vector<ComplexMatrix> ops;
    const KrausChannel tk = t->to_kraus();
    for (const auto& k : tk.kraus()) ops.push_back(kron(k, ketbra(2, j, j)));
    const KrausChannel want(4, 4, ops);
    EXPECT_LE(max_abs_diff(choi_from_kraus(impl.branch(j)).matrix(), choi_from_kraus(want).matrix()), 1e-15);
  }
}

TEST(ExpandNonUniform, RandomModelsPreserveTrace) {
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    const Eigen::Index d = 2 + t % 2, e = 1 + t % 3;
    const InstrumentImplementation impl = expand_nonuniform(random_nonuniform_model(d, e, rng));
    EXPECT_LE(full_channel(impl).trace_preservation_error(), 1e-12);
  }
}

TEST(FullChannel, IdealQubitReadout) {
  const KrausChannel full = full_channel(ideal_instrument(2, 1));
  ASSERT_EQ(full.kraus().size(), 2u);
  for (Eigen::Index j = 0; j < 2; ++j) {
    EXPECT_EQ(max_abs_diff(full.kraus()[static_cast<std::size_t>(j)], kron(ketbra(2, j, j), ket(2, j))), 0.0);
  }
}

TEST(FullChannel, ForgettingTheOutcomeGivesDephasing) {
  const Eigen::Index d = 3, e = 2;
  const KrausChannel full = full_channel(ideal_instrument(d, e));
  const KrausChannel forget = forget_outcome_map(d, e);
  Rng rng(5);
  for (int t = 0; t < 5; ++t) {
    const ComplexMatrix rho = rng.density(d * e, d * e);
    const ComplexMatrix out = qinstr::apply(full, rho);
    const std::vector<std::size_t> dims{static_cast<std::size_t>(d * e), static_cast<std::size_t>(d)};
    const std::vector<std::size_t> keep{0};
    EXPECT_LE(max_abs_diff(partial_trace(out, dims, keep), qinstr::apply(forget, rho)), 1e-14);
  }
}

TEST(FullChannel, CompletelyPositiveAndTracePreserving) {
  Rng rng(6);
  for (int t = 0; t < 10; ++t) {
    const InstrumentImplementation impl = random_general_implementation(2, 1 + t % 2, rng);
    const KrausChannel full = full_channel(impl);
    const ChoiMatrix j = choi_from_kraus(full);
    EXPECT_NEAR(j.matrix().trace().real(), 1.0, 1e-12);
    EXPECT_GE(hermitian_eigenvalues(j.matrix()).minCoeff(), -1e-9);
    const auto n = static_cast<std::size_t>(full.dim_in()), m = static_cast<std::size_t>(full.dim_out());
    const std::vector<std::size_t> dims{n, m};
    const std::vector<std::size_t> keep{0};
    EXPECT_LE(max_abs_diff(partial_trace(j.matrix(), dims, keep), identity(full.dim_in()) / static_cast<double>(n)),
              1e-9);
  }
}

TEST(BornProbabilities, IdealInstrument) {
  Rng rng(7);
  const DensityMatrix rho(kron(rng.density(2, 2), ketbra(3, 0, 0)));
  const auto p = born_probabilities(ideal_instrument(3, 2), rho);
  EXPECT_NEAR(p[0], 1.0, 1e-14);
  EXPECT_NEAR(p[1], 0.0, 1e-14);
  EXPECT_NEAR(p[2], 0.0, 1e-14);
  const auto q = born_probabilities(ideal_instrument(3, 2), DensityMatrix::maximally_mixed(6));
  for (double x : q) EXPECT_NEAR(x, 1.0 / 3.0, 1e-14);
}

TEST(BornProbabilities, ReadoutFlipMatchesBruteForce) {
  const InstrumentImplementation impl = expand_uniform(readout_flip());
  const DensityMatrix rho(ketbra(2, 0, 0));
  const auto p = born_probabilities(impl, rho);
  EXPECT_NEAR(p[0], 0.8, 1e-15);
  EXPECT_NEAR(p[1], 0.2, 1e-15);
  // Brute force: apply the full channel, keep the outcome register.
  const ComplexMatrix out = qinstr::apply(full_channel(impl), rho.matrix());
  const std::vector<std::size_t> dims{2, 2};
  const std::vector<std::size_t> keep{1};
  const ComplexMatrix reg = partial_trace(out, dims, keep);
  EXPECT_NEAR(reg(0, 0).real(), 0.8, 1e-15);
  EXPECT_NEAR(reg(1, 1).real(), 0.2, 1e-15);
}

TEST(BornProbabilities, AgreeWithOutcomeMarginalOnRandomModels) {
  Rng rng(8);
  for (int t = 0; t < 10; ++t) {
    const Eigen::Index d = 2 + t % 2, e = 1 + t % 2;
    const InstrumentImplementation impl = random_general_implementation(d, e, rng);
    const DensityMatrix rho(rng.density(d * e, 2));
    const auto p = born_probabilities(impl, rho);
    const ComplexMatrix out = qinstr::apply(full_channel(impl), rho.matrix());
    const std::vector<std::size_t> dims{static_cast<std::size_t>(d * e), static_cast<std::size_t>(d)};
    const std::vector<std::size_t> keep{1};
    const ComplexMatrix reg = partial_trace(out, dims, keep);
    double total = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      EXPECT_NEAR(p[static_cast<std::size_t>(j)], reg(j, j).real(), 1e-10);
      EXPECT_GE(p[static_cast<std::size_t>(j)], -1e-12);
      total += p[static_cast<std::size_t>(j)];
    }
    EXPECT_NEAR(total, 1.0, 1e-10);
  }
}

TEST(BornProbabilities, RejectsWrongDimension) {
  EXPECT_QINSTR_ERROR(born_probabilities(ideal_instrument(2, 2), DensityMatrix::maximally_mixed(2)),
                      ErrorKind::kDimensionMismatch);
}

TEST(AverageOverOutcomes, UniformTableUnchanged) {
  Rng rng(9);
  const UniformStochasticModel u = random_uniform_model(2, 2, rng);
  const UniformStochasticModel back = average_over_outcomes(NonUniformStochasticModel::from_uniform(u));
  ASSERT_EQ(back.table().size(), u.table().size());
  for (std::size_t k = 0; k < u.table().size(); ++k) {
    const auto& x = u.table()[k].channel.components();
    const auto& y = back.table()[k].channel.components();
    ASSERT_EQ(x.size(), y.size());
    for (std::size_t c = 0; c < x.size(); ++c) EXPECT_NEAR(x[c].weight, y[c].weight, 1e-15);
  }
}

TEST(AverageOverOutcomes, HandAveragedWeights) {
  const UniformStochasticModel avg = average_over_outcomes(outcome_dependent_example());
  const StochasticChannel* t = avg.find(0, 0);
  ASSERT_NE(t, nullptr);
  // (1/2)(I) + (1/2)(0.8 I + 0.2 Z) = 0.9 I + 0.1 Z.
  EXPECT_NEAR(t->components()[0].weight, 0.9, 1e-15);
  EXPECT_NEAR(t->components()[1].weight, 0.1, 1e-15);
  double total = 0.0;
  for (const auto& e : avg.table()) total += e.channel.nu();
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(AverageOverOutcomes, RandomModelsStayNormalized) {
  Rng rng(10);
  for (int t = 0; t < 10; ++t) {
    const UniformStochasticModel avg = average_over_outcomes(random_nonuniform_model(2 + t % 2, 1 + t % 3, rng));
    double total = 0.0;
    for (const auto& e : avg.table()) total += e.channel.nu();
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
}

TEST(ExtendWithReference, PreservesTheMeasurement) {
  Rng rng(11);
  const InstrumentImplementation impl = random_general_implementation(2, 1, rng);
  const InstrumentImplementation ext = extend_with_reference(impl, 3);
  EXPECT_EQ(ext.E(), 3);
  const ComplexMatrix tau = rng.density(3, 2), rho = rng.density(2, 2);
  for (Eigen::Index j = 0; j < 2; ++j) {
    EXPECT_LE(max_abs_diff(qinstr::apply(ext.branch(j), kron(tau, rho)), kron(tau, qinstr::apply(impl.branch(j), rho))), 1e-13);
  }
}

TEST(RandomModels, DimensionErrors) {
  Rng rng(12);
  EXPECT_QINSTR_ERROR(random_uniform_model(2, 5, rng), ErrorKind::kUnsupportedDimension);
  EXPECT_QINSTR_ERROR(random_nonuniform_model(1, 2, rng), ErrorKind::kInvalidArgument);
  EXPECT_QINSTR_ERROR(random_general_implementation(1, 2, rng), ErrorKind::kInvalidArgument);
}

TEST(RandomModels, DeterministicPerSeed) {
  Rng a(13), b(13);
  const UniformStochasticModel x = random_uniform_model(3, 2, a);
  const UniformStochasticModel y = random_uniform_model(3, 2, b);
  ASSERT_EQ(x.table().size(), y.table().size());
  for (std::size_t k = 0; k < x.table().size(); ++k)
    for (std::size_t c = 0; c < x.table()[k].channel.components().size(); ++c)
      EXPECT_EQ(x.table()[k].channel.components()[c].weight, y.table()[k].channel.components()[c].weight);
}

}  // namespace
}  // namespace qinstr
