#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <variant>

#include "orifield/common.hpp"
#include "orifield/spectral.hpp"
#include "orifield/tensor.hpp"

namespace orifield {

/// Built-in closed-form scalar fields: c + a₁x₁ + a₂x₂ + q₁x₁² + q₂x₂².
/// Covers constants, affine fields and the quadratic warps used for textures.
struct ScalarExpr {
  double c = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double q1 = 0.0;
  double q2 = 0.0;

  double operator()(const Vector2d& x) const {
    return c + a1 * x.x() + a2 * x.y() + q1 * x.x() * x.x() + q2 * x.y() * x.y();
  }
  Vector2d gradient(const Vector2d& x) const {
    return {a1 + 2 * q1 * x.x(), a2 + 2 * q2 * x.y()};
  }
  bool is_constant() const { return a1 == 0 && a2 == 0 && q1 == 0 && q2 == 0; }
};

/// Scalar field x ↦ h(x) (Hurst function, orientation angle, ...).
/// Callbacks must be pure and reentrant. Without an analytic gradient,
/// central differences with step 1e-6 are used.
class ScalarField {
 public:
  using Function = std::function<double(const Vector2d&)>;
  using Gradient = std::function<Vector2d(const Vector2d&)>;

  static ScalarField constant(double value);
  static ScalarField expression(const ScalarExpr& expr);
  ScalarField(Function f, Gradient grad = {});

  double operator()(const Vector2d& x) const { return f_(x); }
  Vector2d gradient(const Vector2d& x) const;
  bool has_analytic_gradient() const { return bool(grad_); }
  const std::optional<ScalarExpr>& expr() const { return expr_; }

 private:
  Function f_;
  Gradient grad_;
  std::optional<ScalarExpr> expr_;
};

enum class DeformationKind { UserSupplied, Identity, LocalRotation, AffineConformal };

/// C¹ map Φ together with its Jacobian DΦ.
class Deformation {
 public:
  using Map = std::function<Vector2d(const Vector2d&)>;
  using Jacobian = std::function<Matrix2d(const Vector2d&)>;

  static Deformation user_supplied(Map map, Jacobian jacobian);
  static Deformation identity();

  Vector2d operator()(const Vector2d& x) const { return map_(x); }
  Matrix2d jacobian(const Vector2d& x) const { return jacobian_(x); }
  DeformationKind kind() const { return kind_; }

  /// Rotation field α of a LocalRotation deformation.
  const std::optional<ScalarField>& rotation_field() const { return alpha_; }
  /// (a, b, c) of an AffineConformal deformation.
  const std::optional<Eigen::Vector3d>& conformal_params() const { return abc_; }

 private:
  friend Deformation local_rotation_deformation(ScalarField);
  friend Deformation affine_conformal_deformation(double, double, double);
  Deformation(DeformationKind kind, Map map, Jacobian jacobian)
      : kind_(kind), map_(std::move(map)), jacobian_(std::move(jacobian)) {}

  DeformationKind kind_;
  Map map_;
  Jacobian jacobian_;
  std::optional<ScalarField> alpha_;
  std::optional<Eigen::Vector3d> abc_;
};

/// Φ(x) = R_{−α(x)} x with the closed-form Jacobian
/// [[cos α + ∂₁α Φ₂, sin α + ∂₂α Φ₂], [−sin α − ∂₁α Φ₁, cos α − ∂₂α Φ₁]].
/// det DΦ = 1 + ∂₁α x₂ − ∂₂α x₁ vanishes where ∇α ∧ x = −1.
Deformation local_rotation_deformation(ScalarField alpha);
Deformation local_rotation_deformation(ScalarField::Function alpha, ScalarField::Gradient grad);

/// Conformal warp whose Jacobian is e^{a x₂ − b x₁} R_{−α(x)}, α(x) = a x₁ + b x₂ + c.
/// Throws DegenerateConformal when a = b = 0.
Deformation affine_conformal_deformation(double a, double b, double c);

/// affine_conformal_deformation, falling back to the global rotation x ↦ R_{−c}x when a = b = 0.
Deformation conformal_or_rotation(double a, double b, double c);

class FieldModel;

namespace model {

struct FBF {
  double hurst;
};
struct AFBF {
  double hurst;
  double alpha0;
  double delta;
};
struct SumAFBF {
  double hurst;
  double alpha0;
  double alpha1;
  double delta;
};
/// X(L⁻¹x) for a self-similar base X.
struct LinearDeformed {
  std::shared_ptr<const FieldModel> base;
  Matrix2d L;
};
/// Any self-similar field given by (H, S); produced by tangent fields of
/// GAFBFs with a user amplitude.
struct SelfSimilar {
  double hurst;
  AnisotropySpec anisotropy;
};
struct MBF {
  ScalarField hurst;
};
/// Amplitude C(x, θ) for GAFBFs outside the cone family; must be even in θ.
using Amplitude = std::function<double(const Vector2d&, double)>;
struct GAFBF {
  ScalarField hurst;
  ScalarField alpha;
  double delta;
  Amplitude amplitude;  // empty: cone family C = (1/√2δ)·1[|arg ξ − α(x)| ≤ δ]
};
struct WAFBF {
  Deformation phi;
  AFBF base;
};

}  // namespace model

class FieldModel {
 public:
  using Variant = std::variant<model::FBF, model::AFBF, model::SumAFBF, model::LinearDeformed,
                               model::SelfSimilar, model::MBF, model::GAFBF, model::WAFBF>;

  static FieldModel fbf(Hurst h);
  static FieldModel afbf(Hurst h, double alpha0, double delta);
  static FieldModel sum_afbf(Hurst h, double alpha0, double alpha1, double delta);
  static FieldModel linear_deformed(FieldModel base, const Matrix2d& L);
  static FieldModel self_similar(Hurst h, AnisotropySpec anisotropy);
  static FieldModel mbf(ScalarField hurst);
  static FieldModel gafbf(ScalarField hurst, ScalarField alpha, double delta);
  static FieldModel gafbf(ScalarField hurst, model::Amplitude amplitude);
  static FieldModel wafbf(Deformation phi, Hurst h, double alpha0, double delta);

  const Variant& variant() const { return v_; }
  template <typename T>
  const T* as() const noexcept {
    return std::get_if<T>(&v_);
  }

  /// Name of the family ("fbf", "afbf", ...).
  const char* family() const;
  bool is_self_similar() const;
  /// Hurst exponent of a self-similar model.
  double hurst() const;
  /// Anisotropy function of a self-similar model.
  AnisotropySpec anisotropy() const;

 private:
  explicit FieldModel(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// Tangent (local form) field at x₀; self-similar models return themselves.
FieldModel tangent_field(const FieldModel& m, const Vector2d& x0);

/// Structure tensor of the tangent field at x₀.
StructureTensord local_structure_tensor(const FieldModel& m, const Vector2d& x0,
                                        int nodes = 4096);

/// Local orientation at x₀. GAFBF (cone family) returns u(α(x₀)); WAFBF returns
/// DΦ(x₀)ᵀn/‖DΦ(x₀)ᵀn‖; both with the tangent tensor's coherency.
OrientationResultd local_orientation(const FieldModel& m, const Vector2d& x0,
                                     double tol = kDefaultDegeneracyTol);

}  // namespace orifield
