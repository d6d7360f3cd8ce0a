#pragma once

#include <vector>

#include <Eigen/Eigenvalues>

#include "orifield/common.hpp"
#include "orifield/spectral.hpp"

namespace orifield {

/// Symmetric 2×2 structure tensor.
template <typename Scalar>
struct StructureTensor {
  Scalar j11{0};
  Scalar j12{0};
  Scalar j22{0};

  static StructureTensor from_matrix(const Matrix2<Scalar>& m) {
    return {m(0, 0), Scalar(0.5) * (m(0, 1) + m(1, 0)), m(1, 1)};
  }

  Matrix2<Scalar> matrix() const {
    Matrix2<Scalar> m;
    m << j11, j12, j12, j22;
    return m;
  }

  Scalar trace() const { return j11 + j22; }
  Scalar determinant() const { return j11 * j22 - j12 * j12; }

  bool is_psd(Scalar eps = Scalar(1e-12)) const {
    const Scalar scale = std::max(Scalar(1), std::abs(trace()));
    return j11 >= -eps * scale && j22 >= -eps * scale && determinant() >= -eps * scale * scale;
  }

  StructureTensor& operator+=(const StructureTensor& o) {
    j11 += o.j11;
    j12 += o.j12;
    j22 += o.j22;
    return *this;
  }
  friend StructureTensor operator+(StructureTensor a, const StructureTensor& b) { return a += b; }
  friend StructureTensor operator*(Scalar c, StructureTensor t) {
    t.j11 *= c;
    t.j12 *= c;
    t.j22 *= c;
    return t;
  }
};

using StructureTensord = StructureTensor<double>;

template <typename Scalar>
struct OrientationResult {
  Vector2<Scalar> direction{Scalar(1), Scalar(0)};
  Scalar angle{0};       // (−π/2, π/2]
  Scalar coherency{0};   // [0, 1]
  Scalar lambda_max{0};
  Scalar lambda_min{0};
  bool degenerate{true};
};

using OrientationResultd = OrientationResult<double>;

inline constexpr double kDefaultDegeneracyTol = 1e-9;

/// Orientation and coherency from the dominant eigenvector of J.
/// Axial: the direction is sign-normalized so that its angle lies in (−π/2, π/2].
template <typename Scalar>
OrientationResult<Scalar> orientation_of(const StructureTensor<Scalar>& J,
                                         Scalar tol = Scalar(kDefaultDegeneracyTol)) {
  const Scalar tr = J.trace();
  if (!(tr > 0)) throw Error(ErrorCode::ZeroTensor, "structure tensor has non-positive trace");
  const Scalar half_diff = Scalar(0.5) * (J.j11 - J.j22);
  const Scalar radius = std::hypot(half_diff, J.j12);

  OrientationResult<Scalar> out;
  out.lambda_max = Scalar(0.5) * tr + radius;
  out.lambda_min = Scalar(0.5) * tr - radius;
  out.coherency = std::min(Scalar(1), Scalar(2) * radius / tr);
  out.degenerate = Scalar(2) * radius <= tol * tr;
  if (out.degenerate) {
    out.coherency = 0;
    out.angle = 0;
    out.direction = Vector2<Scalar>(1, 0);
    return out;
  }
  // atan2 ∈ (−π, π] so half of it lands in (−π/2, π/2].
  out.angle = Scalar(0.5) * std::atan2(J.j12, half_diff);
  out.direction = unit_vector(out.angle);
  return out;
}

/// J of the elementary field with orientation α₀ and half-width δ.
template <typename Scalar>
StructureTensor<Scalar> afbf_tensor_closed(Scalar alpha0, Scalar delta) {
  if (!(delta > 0)) throw Error(ErrorCode::InvalidArgument, "delta must be positive");
  const Scalar s = sinc(Scalar(2) * delta);
  return {Scalar(0.5) + Scalar(0.5) * std::cos(2 * alpha0) * s,
          Scalar(0.5) * std::sin(2 * alpha0) * s,
          Scalar(0.5) - Scalar(0.5) * std::cos(2 * alpha0) * s};
}

/// δ → 0 limit of afbf_tensor_closed: the rank-1 projector on u(α₀).
template <typename Scalar>
StructureTensor<Scalar> afbf_tensor_limit(Scalar alpha0) {
  const Scalar c = std::cos(alpha0);
  const Scalar s = std::sin(alpha0);
  return {c * c, c * s, s * s};
}

/// J of X_{α₀,δ} + X_{α₁,δ}; requires disjoint supports δ < |α₁−α₀|/2.
template <typename Scalar>
StructureTensor<Scalar> sum_afbf_tensor_closed(Scalar alpha0, Scalar alpha1, Scalar delta) {
  if (!(delta > 0)) throw Error(ErrorCode::InvalidArgument, "delta must be positive");
  if (!(delta < std::abs(alpha1 - alpha0) / 2))
    throw Error(ErrorCode::OverlappingCones, "requires delta < |alpha1 - alpha0| / 2");
  const Scalar s = Scalar(0.5) * sinc(Scalar(2) * delta);
  const Scalar c2 = std::cos(2 * alpha0) + std::cos(2 * alpha1);
  const Scalar s2 = std::sin(2 * alpha0) + std::sin(2 * alpha1);
  return {1 + s * c2, s * s2, 1 - s * c2};
}

/// (L⁻¹)ᵀ n / ‖(L⁻¹)ᵀ n‖: orientation carried by X ↦ X(L⁻¹ ·).
template <typename Scalar>
Vector2<Scalar> deformed_orientation(const Vector2<Scalar>& n, const Matrix2<Scalar>& L) {
  const Scalar det = L.determinant();
  if (det == 0 || !std::isfinite(det) ||
      std::abs(det) <= Scalar(1e-14) * L.squaredNorm())
    throw Error(ErrorCode::NonInvertible, "deformation matrix is singular");
  // (L⁻¹)ᵀ = cof(L)/det; normalization removes the determinant.
  Matrix2<Scalar> inv_t;
  inv_t << L(1, 1), -L(1, 0), -L(0, 1), L(0, 0);
  const Vector2<Scalar> v = inv_t * n;
  return (det > 0 ? Scalar(1) : Scalar(-1)) * v / v.norm();
}

/// Gauss–Legendre nodes/weights on [−1, 1] by Golub–Welsch.
template <typename Scalar>
void gauss_legendre(int order, std::vector<Scalar>& nodes, std::vector<Scalar>& weights) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Mat jacobi = Mat::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    const Scalar b = Scalar(k) / std::sqrt(Scalar(4 * k * k - 1));
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(jacobi);
  nodes.resize(order);
  weights.resize(order);
  for (int k = 0; k < order; ++k) {
    nodes[k] = es.eigenvalues()(k);
    const Scalar v0 = es.eigenvectors()(0, k);
    weights[k] = 2 * v0 * v0;
  }
}

/// J_{ℓ₁ℓ₂} = ∫_{S¹} Θ_{ℓ₁}Θ_{ℓ₂} S(Θ) dΘ by composite Gauss–Legendre, with
/// panels split at every discontinuity of S. `nodes` is the total node budget.
StructureTensord structure_tensor_quadrature(const AnisotropySpec& s, int nodes = 4096);

/// ∫_{S¹} S(Θ) dΘ with the same panel layout.
double anisotropy_mass(const AnisotropySpec& s, int nodes = 4096);

}  // namespace orifield
