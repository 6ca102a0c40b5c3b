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

#ifndef QINSTR_CONFIG_HPP
#define QINSTR_CONFIG_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace qinstr {

/// Numerical tolerances shared by every module.
///
/// All defaults live here so acceptance runs have a single knob. Functions
/// that need a tolerance take a `const Tolerances&` defaulting to
/// `default_tolerances()`.
struct Tolerances {
  /// Max-abs deviation from Hermiticity accepted for "Hermitian" inputs.
  double hermitian = 1e-10;
  /// Smallest eigenvalue accepted for a density matrix.
  double density_eigenvalue = 1e-10;
  /// Deviation of a density matrix trace from 1.
  double density_trace = 1e-10;
  /// Relative clamp for negative eigenvalues in PSD operations; the absolute
  /// clamp is `psd_clamp * max(1, spectral norm)`.
  double psd_clamp = 1e-9;
  /// Singular values below `rank_cutoff * sigma_max` count as zero.
  double rank_cutoff = 1e-10;
  /// Trace-preservation check on sum K^dagger K.
  double trace_preserving = 1e-9;
  /// Weight normalization of stochastic models.
  double normalization = 1e-9;
  /// Orthogonality of stochastic-channel basis unitaries.
  double orthogonality = 1e-10;
  /// Support cutoff for the default projector in fvg_bounds.
  double support = 1e-10;
  /// Check of pi rho = rho for user-supplied projectors.
  double projector = 1e-9;
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

enum class ErrorKind {
  kDimensionMismatch,
  kNotHermitian,
  kNotPSD,
  kNonFinite,
  kInvalidDensity,
  kInvalidModel,
  kInvalidChannel,
  kUnsupportedDimension,
  kInvalidProjector,
  kDimensionTooLarge,
  kParse,
  kInvalidArgument,
};

inline std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kNotHermitian: return "NotHermitian";
    case ErrorKind::kNotPSD: return "NotPSD";
    case ErrorKind::kNonFinite: return "NonFinite";
    case ErrorKind::kInvalidDensity: return "InvalidDensity";
    case ErrorKind::kInvalidModel: return "InvalidModel";
    case ErrorKind::kInvalidChannel: return "InvalidChannel";
    case ErrorKind::kUnsupportedDimension: return "UnsupportedDimension";
    case ErrorKind::kInvalidProjector: return "InvalidProjector";
    case ErrorKind::kDimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::kParse: return "ParseError";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qinstr

#endif  // QINSTR_CONFIG_HPP
