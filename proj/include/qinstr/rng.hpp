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

#ifndef QINSTR_RNG_HPP
#define QINSTR_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "qinstr/linalg.hpp"

namespace qinstr {

/// Counter-based, splittable random stream.
///
/// Integer stream (bit-exact on every platform):
///
///     key    = mix64(seed)
///     out[i] = mix64(key + (i + 1) * 0x9E3779B97F4A7C15)      for i = 0, 1, ...
///
/// where mix64 is the SplitMix64 finalizer
///
///     z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///     z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///     z =  z ^ (z >> 31)
///
/// `split(s)` returns an independent stream keyed by
/// mix64(key ^ mix64(s + 0x632BE59BD9B4E019)); it does not advance the parent.
/// Doubles use the top 53 bits: (out >> 11) * 2^-53, in [0, 1).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : key_(mix64(seed)) {}

  static constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next_u64() {
    ++counter_;
    return mix64(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
  }

  Rng split(std::uint64_t stream) const {
    Rng child(0);
    child.key_ = mix64(key_ ^ mix64(stream + 0x632BE59BD9B4E019ULL));
    return child;
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)); }

  /// Standard normal via Box-Muller; consumes two draws per call.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Gamma(shape, 1) by Marsaglia-Tsang, with the shape < 1 boost.
  double gamma(double shape) {
    if (shape < 1.0) {
      const double u = 1.0 - uniform();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = 1.0 - uniform();
      if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
    }
  }

  /// Symmetric Dirichlet(concentration) sample of length k.
  std::vector<double> dirichlet(std::size_t k, double concentration) {
    std::vector<double> w(k);
    double total = 0.0;
    for (auto& x : w) total += (x = gamma(concentration));
    if (total <= 0.0) {
      // Underflow for tiny concentrations: fall back to a single vertex.
      std::fill(w.begin(), w.end(), 0.0);
      w[below(k)] = 1.0;
      return w;
    }
    for (auto& x : w) x /= total;
    return w;
  }

  cplx complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
  }

  /// Ginibre matrix with i.i.d. standard complex normal entries.
  ComplexMatrix ginibre(Eigen::Index rows, Eigen::Index cols) {
    ComplexMatrix g(rows, cols);
    for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = complex_normal();
    return g;
  }

  /// Haar-random unit vector.
  ComplexVector pure_state(Eigen::Index dim) {
    ComplexVector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = complex_normal();
    return v / v.norm();
  }

  /// Random density matrix G G^dagger / tr of the requested rank.
  ComplexMatrix density(Eigen::Index dim, Eigen::Index rank) {
    const ComplexMatrix g = ginibre(dim, rank);
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return hermitian_part(rho);
  }

  /// Random Hermitian matrix (G + G^dagger) / 2.
  ComplexMatrix hermitian(Eigen::Index dim) { return hermitian_part(ginibre(dim, dim)); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace qinstr

#endif  // QINSTR_RNG_HPP
