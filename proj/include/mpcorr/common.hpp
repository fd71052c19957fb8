#pragma once

#include <complex>
#include <concepts>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

namespace mpcorr {

using Index = Eigen::Index;

template <std::floating_point Real>
using Complex = std::complex<Real>;

template <std::floating_point Real>
using CMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <std::floating_point Real>
using CVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;

template <std::floating_point Real>
using RMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

template <std::floating_point Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// Ordered subsystem dimensions (n_1, ..., n_N).
using Dims = std::vector<int>;

/// Largest total Hilbert-space dimension accepted anywhere in the library.
inline constexpr Index kMaxTotalDimension = 256;

enum class ErrorCode {
  NotHermitian,
  TraceNotOne,
  NotPSD,
  ShapeMismatch,
  InvalidArgument,
  Unsupported,
  MixedStateUnsupported,
  DegenerateBlochVectors,
  NullProjection,
  NegativeDiscriminant,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::TraceNotOne: return "TraceNotOne";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::MixedStateUnsupported: return "MixedStateUnsupported";
    case ErrorCode::DegenerateBlochVectors: return "DegenerateBlochVectors";
    case ErrorCode::NullProjection: return "NullProjection";
    case ErrorCode::NegativeDiscriminant: return "NegativeDiscriminant";
  }
  return "Unknown";
}

/// Library error. Validation failures carry the offending residual.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, std::optional<double> residual = std::nullopt)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        residual_(residual) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<double> residual() const noexcept { return residual_; }

  bool is_validation() const noexcept {
    return code_ == ErrorCode::NotHermitian || code_ == ErrorCode::TraceNotOne ||
           code_ == ErrorCode::NotPSD;
  }

 private:
  ErrorCode code_;
  std::optional<double> residual_;
};

inline Index total_dimension(const Dims& dims) {
  Index d = 1;
  for (int n : dims) d *= n;
  return d;
}

/// Party label used in reports: 0 -> "A", 1 -> "B", ...
inline std::string party_label(int party) { return std::string(1, static_cast<char>('A' + party)); }

}  // namespace mpcorr
