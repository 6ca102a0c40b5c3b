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

#ifndef QINSTR_RANDOM_MODELS_HPP
#define QINSTR_RANDOM_MODELS_HPP

// Seeded generators for noisy instrument models. Every draw goes through the
// Rng argument, so a fixed seed gives a fixed model.

#include <cmath>
#include <vector>

#include "qinstr/channels.hpp"
#include "qinstr/config.hpp"
#include "qinstr/instruments.hpp"
#include "qinstr/rng.hpp"

namespace qinstr {

namespace detail {

inline void check_model_dims(Eigen::Index D, Eigen::Index E) {
  if (D < 2) throw Error(ErrorKind::kInvalidArgument, "D must be at least 2");
  if (E < 1 || E > kMaxWeylDim) {
    throw Error(ErrorKind::kUnsupportedDimension,
                "no Weyl basis shipped for E = " + std::to_string(E) + " (supported: 1.." + std::to_string(kMaxWeylDim) + ")");
  }
}

/// (1 - p) id + p C for a random channel C; p is drawn from [0, p_max].
inline KrausChannel near_identity_channel(Eigen::Index n, double p_max, Rng& rng) {
  const double p = rng.uniform(0.0, p_max);
  const KrausChannel c = random_channel(n, n, 2, rng);
  std::vector<ComplexMatrix> ops{std::sqrt(1.0 - p) * identity(n)};
  for (const auto& k : c.kraus()) ops.push_back(std::sqrt(p) * k);
  return {n, n, std::move(ops)};
}

}  // namespace detail

/// nu_00 ~ U[0.5, 0.99] with lambda_00 ~ U[0.5, 1]; the remaining weight is
/// Dirichlet-split over the other (a, b) and each T_{a,b} has Dirichlet Weyl
/// weights.
inline UniformStochasticModel random_uniform_model(Eigen::Index D, Eigen::Index E, Rng& rng) {
  detail::check_model_dims(D, E);
  const double nu00 = rng.uniform(0.5, 0.99);
  const auto rest = rng.dirichlet(static_cast<std::size_t>(D * D - 1), 1.0);
  std::vector<UniformEntry> table;
  table.push_back({0, 0, random_stochastic_with_lambda(E, nu00, rng.uniform(0.5, 1.0), rng)});
  std::size_t k = 0;
  for (Eigen::Index a = 0; a < D; ++a) {
    for (Eigen::Index b = 0; b < D; ++b) {
      if (a == 0 && b == 0) continue;
      table.push_back({a, b, random_stochastic_channel(E, (1.0 - nu00) * rest[k++], rng.next_u64())});
    }
  }
  return {D, E, std::move(table)};
}

/// For every input level k of the measured register, a distribution over
/// (j, a) that puts p_k ~ U[0.5, 0.99] on the correct outcome j = k, a = 0.
/// Entry (a, k - j, j) carries that weight.
inline NonUniformStochasticModel random_nonuniform_model(Eigen::Index D, Eigen::Index E, Rng& rng) {
  detail::check_model_dims(D, E);
  std::vector<NonUniformEntry> table;
  for (Eigen::Index k = 0; k < D; ++k) {
    const double p = rng.uniform(0.5, 0.99);
    const auto rest = rng.dirichlet(static_cast<std::size_t>(D * D - 1), 1.0);
    std::size_t r = 0;
    for (Eigen::Index j = 0; j < D; ++j) {
      for (Eigen::Index a = 0; a < D; ++a) {
        const Eigen::Index b = ((k - j) % D + D) % D;
        if (j == k && a == 0) {
          table.push_back({a, b, j, random_stochastic_with_lambda(E, p, rng.uniform(0.5, 1.0), rng)});
        } else {
          table.push_back({a, b, j, random_stochastic_channel(E, (1.0 - p) * rest[r++], rng.next_u64())});
        }
      }
    }
  }
  return {D, E, std::move(table)};
}

/// Branch j has Kraus operators A_beta pi_j B_alpha, where B and A are
/// independent near-identity channels on C^(E D) with noise strength up to
/// 0.3.
inline InstrumentImplementation random_general_implementation(Eigen::Index D, Eigen::Index E, Rng& rng) {
  if (D < 2) throw Error(ErrorKind::kInvalidArgument, "D must be at least 2");
  if (E < 1) throw Error(ErrorKind::kInvalidArgument, "E must be positive");
  const Eigen::Index n = D * E;
  const SubsystemMeasurement m(D, E);
  const KrausChannel before = detail::near_identity_channel(n, 0.3, rng);
  const KrausChannel after = detail::near_identity_channel(n, 0.3, rng);
  std::vector<KrausChannel> branches;
  for (Eigen::Index j = 0; j < D; ++j) {
    std::vector<ComplexMatrix> ops;
    const ComplexMatrix pj = m.projector(j);
    for (const auto& b : before.kraus())
      for (const auto& a : after.kraus()) ops.push_back(a * pj * b);
    branches.push_back({n, n, std::move(ops)});
  }
  return {D, E, std::move(branches)};
}

/// The outcome-dependent model with T_0 = I and T_1 = {I: 0.8, Z: 0.2} on a
/// qubit, D = 2, no measurement errors.
inline NonUniformStochasticModel outcome_dependent_example() {
  std::vector<NonUniformEntry> table;
  table.push_back({0, 0, 0, StochasticChannel::weyl(2, std::vector<double>{1.0, 0.0, 0.0, 0.0})});
  table.push_back({0, 0, 1, StochasticChannel::weyl(2, std::vector<double>{0.8, 0.2, 0.0, 0.0})});
  return {2, 2, std::move(table)};
}

/// D outcomes, T_0 = I and T_j for j > 0 a trace-preserving stochastic channel
/// with identity weight lambda_j ~ U[lambda_lo, lambda_hi].
inline NonUniformStochasticModel random_outcome_dependent_model(Eigen::Index D, Eigen::Index E, double lambda_lo,
                                                                double lambda_hi, Rng& rng) {
  detail::check_model_dims(D, E);
  std::vector<NonUniformEntry> table;
  std::vector<double> id(static_cast<std::size_t>(E * E), 0.0);
  id[0] = 1.0;
  table.push_back({0, 0, 0, StochasticChannel::weyl(E, id)});
  for (Eigen::Index j = 1; j < D; ++j) {
    table.push_back({0, 0, j, random_stochastic_with_lambda(E, 1.0, rng.uniform(lambda_lo, lambda_hi), rng)});
  }
  return {D, E, std::move(table)};
}

}  // namespace qinstr

#endif  // QINSTR_RANDOM_MODELS_HPP
