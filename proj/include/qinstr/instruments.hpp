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

#ifndef QINSTR_INSTRUMENTS_HPP
#define QINSTR_INSTRUMENTS_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "qinstr/channels.hpp"
#include "qinstr/config.hpp"
#include "qinstr/linalg.hpp"

// Tensor-factor order everywhere in this header:
//   (unmeasured register, dim E) (x) (measured register, dim D) (x) (outcome register, dim D)
// Outcome arithmetic j + a, j + b is taken mod D.

namespace qinstr {

/// Dimensions of a subsystem measurement: a D-level register measured in the
/// computational basis while an E-level register idles.
struct SubsystemMeasurement {
  Eigen::Index D = 2;
  Eigen::Index E = 1;

  SubsystemMeasurement(Eigen::Index d, Eigen::Index e) : D(d), E(e) {
    if (D < 2 || E < 1) throw Error(ErrorKind::kDimensionMismatch, "subsystem measurement needs D >= 2 and E >= 1");
  }

  Eigen::Index system_dim() const noexcept { return D * E; }

  /// pi_j = I_E (x) |j><j|.
  ComplexMatrix projector(Eigen::Index j) const { return kron(identity(E), ketbra(D, j, j)); }
};

/// A branch-indexed implementation {M_j} of a subsystem measurement. Each
/// branch is CP on C^{ED}; the branches must sum to a trace-preserving map.
class InstrumentImplementation {
 public:
  InstrumentImplementation(Eigen::Index D, Eigen::Index E, std::vector<KrausChannel> branches,
                           const Tolerances& tol = default_tolerances())
      : shape_(D, E), branches_(std::move(branches)) {
    if (static_cast<Eigen::Index>(branches_.size()) != D) {
      throw Error(ErrorKind::kInvalidModel, "expected " + std::to_string(D) + " branches, got " +
                                                std::to_string(branches_.size()));
    }
    const Eigen::Index n = D * E;
    ComplexMatrix gram = ComplexMatrix::Zero(n, n);
    for (const auto& b : branches_) {
      if (b.dim_in() != n || b.dim_out() != n) {
        throw Error(ErrorKind::kDimensionMismatch, "each branch must act on C^(E*D)");
      }
      gram += b.kraus_gram();
    }
    const double err = (gram - identity(n)).cwiseAbs().maxCoeff();
    if (err > tol.trace_preserving) {
      throw Error(ErrorKind::kInvalidModel, "branches do not sum to a trace-preserving map (deviation " +
                                                std::to_string(err) + ")");
    }
  }

  Eigen::Index D() const noexcept { return shape_.D; }
  Eigen::Index E() const noexcept { return shape_.E; }
  const SubsystemMeasurement& shape() const noexcept { return shape_; }
  const std::vector<KrausChannel>& branches() const noexcept { return branches_; }
  const KrausChannel& branch(Eigen::Index j) const { return branches_.at(static_cast<std::size_t>(j)); }

 private:
  SubsystemMeasurement shape_;
  std::vector<KrausChannel> branches_;
};

/// Ideal Lueders instrument: branch j is ad_{pi_j}.
inline InstrumentImplementation ideal_instrument(Eigen::Index D, Eigen::Index E) {
  const SubsystemMeasurement m(D, E);
  std::vector<KrausChannel> branches;
  for (Eigen::Index j = 0; j < D; ++j) branches.push_back({D * E, D * E, {m.projector(j)}});
  return {D, E, std::move(branches)};
}

/// Perform the ideal measurement and forget the outcome: sum_j ad_{pi_j}.
inline KrausChannel forget_outcome_map(Eigen::Index D, Eigen::Index E) {
  const SubsystemMeasurement m(D, E);
  std::vector<KrausChannel> parts;
  for (Eigen::Index j = 0; j < D; ++j) parts.push_back({D * E, D * E, {m.projector(j)}});
  return channel_sum(parts);
}

// ===========================================================================
// Stochastic error models
// ===========================================================================

struct UniformEntry {
  Eigen::Index a = 0;
  Eigen::Index b = 0;
  StochasticChannel channel;
};

struct NonUniformEntry {
  Eigen::Index a = 0;
  Eigen::Index b = 0;
  Eigen::Index j = 0;
  StochasticChannel channel;
};

namespace detail {

inline void check_index(Eigen::Index x, Eigen::Index D, const char* what) {
  if (x < 0 || x >= D) throw Error(ErrorKind::kInvalidModel, std::string(what) + " index out of range");
}

inline void check_channel_dim(const StochasticChannel& ch, Eigen::Index E) {
  if (ch.dim() != E) throw Error(ErrorKind::kInvalidModel, "table channel acts on the wrong dimension");
}

/// Kraus operators of T (x) |j+a><j+b| appended to `ops`.
inline void append_branch_terms(std::vector<ComplexMatrix>& ops, const StochasticChannel& t, Eigen::Index D,
                                Eigen::Index j, Eigen::Index a, Eigen::Index b) {
  const ComplexMatrix flip = ketbra(D, (j + a) % D, (j + b) % D);
  for (const auto& c : t.components()) {
    if (c.weight > 0.0) ops.push_back(kron(std::sqrt(c.weight) * c.unitary, flip));
  }
}

}  // namespace detail

/// Uniform stochastic implementation: errors T_{a,b} independent of the
/// observed outcome. Missing (a, b) entries are the zero map.
class UniformStochasticModel {
 public:
  UniformStochasticModel(Eigen::Index D, Eigen::Index E, std::vector<UniformEntry> table,
                         const Tolerances& tol = default_tolerances())
      : shape_(D, E), table_(std::move(table)) {
    std::vector<bool> seen(static_cast<std::size_t>(D * D), false);
    double total = 0.0;
    for (const auto& e : table_) {
      detail::check_index(e.a, D, "a");
      detail::check_index(e.b, D, "b");
      detail::check_channel_dim(e.channel, E);
      auto s = seen[static_cast<std::size_t>(e.a * D + e.b)];
      if (s) throw Error(ErrorKind::kInvalidModel, "duplicate (a, b) entry");
      s = true;
      total += e.channel.nu();
    }
    if (std::abs(total - 1.0) > tol.normalization) {
      throw Error(ErrorKind::kInvalidModel, "sum of nu_{a,b} is " + std::to_string(total) + ", expected 1");
    }
    std::sort(table_.begin(), table_.end(),
              [](const UniformEntry& x, const UniformEntry& y) { return std::pair(x.a, x.b) < std::pair(y.a, y.b); });
  }

  Eigen::Index D() const noexcept { return shape_.D; }
  Eigen::Index E() const noexcept { return shape_.E; }
  const std::vector<UniformEntry>& table() const noexcept { return table_; }

  const StochasticChannel* find(Eigen::Index a, Eigen::Index b) const {
    for (const auto& e : table_)
      if (e.a == a && e.b == b) return &e.channel;
    return nullptr;
  }

  double nu(Eigen::Index a, Eigen::Index b) const {
    const auto* t = find(a, b);
    return t ? t->nu() : 0.0;
  }

 private:
  SubsystemMeasurement shape_;
  std::vector<UniformEntry> table_;
};

/// Non-uniform stochastic implementation: errors T_{a,b,j} may depend on the
/// observed outcome j. The weights are normalized per input level k of the
/// measured register, sum_{a,j} nu_{a,k-j,j} = 1, which is exactly the
/// condition for the total map to be trace-preserving. Tables that are
/// constant in j or supported on a = b = 0 are also normalized per outcome.
class NonUniformStochasticModel {
 public:
  NonUniformStochasticModel(Eigen::Index D, Eigen::Index E, std::vector<NonUniformEntry> table,
                            const Tolerances& tol = default_tolerances())
      : shape_(D, E), table_(std::move(table)) {
    std::vector<bool> seen(static_cast<std::size_t>(D * D * D), false);
    // Input level k of the measured register reaches branch j through b = k - j.
    std::vector<double> total(static_cast<std::size_t>(D), 0.0);
    for (const auto& e : table_) {
      detail::check_index(e.a, D, "a");
      detail::check_index(e.b, D, "b");
      detail::check_index(e.j, D, "j");
      detail::check_channel_dim(e.channel, E);
      auto s = seen[static_cast<std::size_t>((e.a * D + e.b) * D + e.j)];
      if (s) throw Error(ErrorKind::kInvalidModel, "duplicate (a, b, j) entry");
      s = true;
      total[static_cast<std::size_t>((e.j + e.b) % D)] += e.channel.nu();
    }
    for (Eigen::Index k = 0; k < D; ++k) {
      const double t = total[static_cast<std::size_t>(k)];
      if (std::abs(t - 1.0) > tol.normalization) {
        throw Error(ErrorKind::kInvalidModel, "sum over (a, j) of nu_{a, k-j, j} for input k = " + std::to_string(k) +
                                                  " is " + std::to_string(t) + ", expected 1");
      }
    }
    std::sort(table_.begin(), table_.end(), [](const NonUniformEntry& x, const NonUniformEntry& y) {
      return std::tuple(x.j, x.a, x.b) < std::tuple(y.j, y.a, y.b);
    });
  }

  /// The same table for every outcome.
  static NonUniformStochasticModel from_uniform(const UniformStochasticModel& m) {
    std::vector<NonUniformEntry> t;
    for (Eigen::Index j = 0; j < m.D(); ++j)
      for (const auto& e : m.table()) t.push_back({e.a, e.b, j, e.channel});
    return {m.D(), m.E(), std::move(t)};
  }

  Eigen::Index D() const noexcept { return shape_.D; }
  Eigen::Index E() const noexcept { return shape_.E; }
  const std::vector<NonUniformEntry>& table() const noexcept { return table_; }

  const StochasticChannel* find(Eigen::Index a, Eigen::Index b, Eigen::Index j) const {
    for (const auto& e : table_)
      if (e.a == a && e.b == b && e.j == j) return &e.channel;
    return nullptr;
  }

 private:
  SubsystemMeasurement shape_;
  std::vector<NonUniformEntry> table_;
};

/// Branch j = sum_{a,b} T_{a,b} (x) ad_{|j+a><j+b|}.
inline InstrumentImplementation expand_uniform(const UniformStochasticModel& model) {
  const Eigen::Index D = model.D(), E = model.E();
  std::vector<KrausChannel> branches;
  for (Eigen::Index j = 0; j < D; ++j) {
    std::vector<ComplexMatrix> ops;
    for (const auto& e : model.table()) detail::append_branch_terms(ops, e.channel, D, j, e.a, e.b);
    branches.push_back({D * E, D * E, std::move(ops)});
  }
  return {D, E, std::move(branches)};
}

/// Branch j = sum_{a,b} T_{a,b,j} (x) ad_{|j+a><j+b|}.
inline InstrumentImplementation expand_nonuniform(const NonUniformStochasticModel& model) {
  const Eigen::Index D = model.D(), E = model.E();
  std::vector<std::vector<ComplexMatrix>> ops(static_cast<std::size_t>(D));
  for (const auto& e : model.table()) {
    detail::append_branch_terms(ops[static_cast<std::size_t>(e.j)], e.channel, D, e.j, e.a, e.b);
  }
  std::vector<KrausChannel> branches;
  for (auto& o : ops) branches.push_back({D * E, D * E, std::move(o)});
  return {D, E, std::move(branches)};
}

/// The whole instrument as one channel C^{ED} -> C^{ED} (x) C^D: every Kraus
/// operator K of branch j becomes K (x) |j>.
inline KrausChannel full_channel(const InstrumentImplementation& impl) {
  const Eigen::Index D = impl.D(), n = impl.D() * impl.E();
  std::vector<ComplexMatrix> ops;
  for (Eigen::Index j = 0; j < D; ++j) {
    const ComplexMatrix outcome = ket(D, j);
    for (const auto& k : impl.branch(j).kraus()) ops.push_back(kron(k, outcome));
  }
  return {n, n * D, std::move(ops)};
}

/// I_F (x) M_j for every branch; the implementation of the same measurement
/// with unmeasured register F * E.
inline InstrumentImplementation extend_with_reference(const InstrumentImplementation& impl, Eigen::Index ref_dim) {
  if (ref_dim == 1) return impl;
  std::vector<KrausChannel> branches;
  for (const auto& b : impl.branches()) branches.push_back(extend_with_identity(b, ref_dim));
  return {impl.D(), ref_dim * impl.E(), std::move(branches)};
}

/// p(j) = tr M_j(rho).
inline std::vector<double> born_probabilities(const InstrumentImplementation& impl, const DensityMatrix& rho) {
  if (rho.dim() != impl.D() * impl.E()) {
    throw Error(ErrorKind::kDimensionMismatch, "state dimension " + std::to_string(rho.dim()) +
                                                   " does not match E*D = " + std::to_string(impl.D() * impl.E()));
  }
  std::vector<double> p;
  p.reserve(static_cast<std::size_t>(impl.D()));
  for (const auto& b : impl.branches()) {
    double acc = 0.0;
    for (const auto& k : b.kraus()) acc += (k * rho.matrix() * k.adjoint()).trace().real();
    p.push_back(acc);
  }
  return p;
}

/// T_{a,b} = (1/D) sum_j T_{a,b,j}. Components are merged by Weyl label, or
/// by identical unitaries for non-Weyl channels; mixtures that would break
/// the orthogonal-unitary form raise InvalidModel.
inline UniformStochasticModel average_over_outcomes(const NonUniformStochasticModel& model) {
  const Eigen::Index D = model.D(), E = model.E();
  std::vector<UniformEntry> out;
  for (Eigen::Index a = 0; a < D; ++a) {
    for (Eigen::Index b = 0; b < D; ++b) {
      std::vector<ComplexMatrix> unitaries;
      std::vector<double> weights;
      bool weyl = true, any = false;
      for (Eigen::Index j = 0; j < D; ++j) {
        const auto* t = model.find(a, b, j);
        if (!t) continue;
        any = true;
        weyl = weyl && t->all_weyl();
        for (const auto& c : t->components()) {
          std::size_t k = 0;
          while (k < unitaries.size() && (unitaries[k] - c.unitary).cwiseAbs().maxCoeff() > 1e-12) ++k;
          if (k == unitaries.size()) {
            unitaries.push_back(c.unitary);
            weights.push_back(0.0);
          }
          weights[k] += c.weight / static_cast<double>(D);
        }
      }
      if (!any) continue;
      try {
        if (weyl) {
          std::vector<std::pair<WeylIndex, double>> w;
          for (std::size_t k = 0; k < unitaries.size(); ++k) {
            // Recover the label by matching against the Weyl basis.
            for (Eigen::Index x = 0; x < E; ++x)
              for (Eigen::Index z = 0; z < E; ++z)
                if ((weyl_operator(E, x, z) - unitaries[k]).cwiseAbs().maxCoeff() <= 1e-12)
                  w.push_back({{x, z}, weights[k]});
          }
          out.push_back({a, b, StochasticChannel::weyl(E, w)});
        } else {
          out.push_back({a, b, StochasticChannel::from_unitaries(E, unitaries, weights)});
        }
      } catch (const Error& err) {
        throw Error(ErrorKind::kInvalidModel, std::string("averaged table entry is not stochastic: ") + err.what());
      }
    }
  }
  return {D, E, std::move(out)};
}

}  // namespace qinstr

#endif  // QINSTR_INSTRUMENTS_HPP
