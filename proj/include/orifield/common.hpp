#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/LU>

namespace orifield {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;

using Vector2d = Vector2<double>;
using Matrix2d = Matrix2<double>;

/// Row-major n×n raster. Row index runs along x₂, column index along x₁.
using Raster = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexRaster =
    Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class ErrorCode {
  InvalidArgument,
  NonInvertible,
  ZeroFrequency,
  OverlappingCones,
  ZeroTensor,
  SingularJacobian,
  DegenerateConformal,
  InvalidFrequencyGrid,
  DomainEscape,
  BudgetExceeded,
  ScaleOutOfBand,
  EmptyScale,
  InsufficientScales,
  Format,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonInvertible: return "NonInvertible";
    case ErrorCode::ZeroFrequency: return "ZeroFrequency";
    case ErrorCode::OverlappingCones: return "OverlappingCones";
    case ErrorCode::ZeroTensor: return "ZeroTensor";
    case ErrorCode::SingularJacobian: return "SingularJacobian";
    case ErrorCode::DegenerateConformal: return "DegenerateConformal";
    case ErrorCode::InvalidFrequencyGrid: return "InvalidFrequencyGrid";
    case ErrorCode::DomainEscape: return "DomainEscape";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::ScaleOutOfBand: return "ScaleOutOfBand";
    case ErrorCode::EmptyScale: return "EmptyScale";
    case ErrorCode::InsufficientScales: return "InsufficientScales";
    case ErrorCode::Format: return "Format";
  }
  return "Unknown";
}

/// Representative of an axial angle (θ ~ θ+π) in (−π/2, π/2].
template <typename Scalar>
Scalar wrap_axial(Scalar theta) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  Scalar r = std::remainder(theta, pi);  // [−π/2, π/2]
  if (r <= -pi / 2) r += pi;
  return r;
}

/// Representative of a periodic angle in [0, 2π).
template <typename Scalar>
Scalar wrap_two_pi(Scalar theta) {
  constexpr Scalar two_pi = 2 * std::numbers::pi_v<Scalar>;
  Scalar r = std::fmod(theta, two_pi);
  if (r < 0) r += two_pi;
  if (r >= two_pi) r = 0;
  return r;
}

template <typename Scalar>
Matrix2<Scalar> rotation(Scalar theta) {
  Matrix2<Scalar> r;
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

template <typename Scalar>
Vector2<Scalar> unit_vector(Scalar theta) {
  return Vector2<Scalar>(std::cos(theta), std::sin(theta));
}

/// sin(t)/t with the removable singularity filled in.
template <typename Scalar>
Scalar sinc(Scalar t) {
  if (std::abs(t) < Scalar(1e-4)) {
    const Scalar t2 = t * t;
    return 1 - t2 / 6 + t2 * t2 / 120;
  }
  return std::sin(t) / t;
}

}  // namespace orifield
