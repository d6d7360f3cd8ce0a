#include "orifield/fields.hpp"

#include <sstream>

namespace orifield {

namespace {

constexpr double kFdStep = 1e-6;

OrientationResultd axial_result(const Vector2d& v, double coherency) {
  OrientationResultd out;
  out.angle = wrap_axial(std::atan2(v.y(), v.x()));
  out.direction = unit_vector(out.angle);
  out.coherency = coherency;
  out.degenerate = false;
  return out;
}

void check_delta(double delta) {
  if (!(delta > 0.0) || delta > std::numbers::pi)
    throw Error(ErrorCode::InvalidArgument, "delta must lie in (0, pi]");
}

Matrix2d checked_inverse(const Matrix2d& J, const Vector2d& x0) {
  const double det = J.determinant();
  if (!std::isfinite(det) || std::abs(det) <= 1e-12 * std::max(1.0, J.squaredNorm())) {
    std::ostringstream os;
    os << "Jacobian is singular at (" << x0.x() << ", " << x0.y() << ")";
    throw Error(ErrorCode::SingularJacobian, os.str());
  }
  return J.inverse();
}

}  // namespace

// ---------------------------------------------------------------- ScalarField

ScalarField ScalarField::constant(double value) {
  ScalarExpr e;
  e.c = value;
  return expression(e);
}

ScalarField ScalarField::expression(const ScalarExpr& expr) {
  ScalarField f([expr](const Vector2d& x) { return expr(x); },
                [expr](const Vector2d& x) { return expr.gradient(x); });
  f.expr_ = expr;
  return f;
}

ScalarField::ScalarField(Function f, Gradient grad) : f_(std::move(f)), grad_(std::move(grad)) {
  if (!f_) throw Error(ErrorCode::InvalidArgument, "empty scalar field");
}

Vector2d ScalarField::gradient(const Vector2d& x) const {
  if (grad_) return grad_(x);
  const Vector2d e1(kFdStep, 0.0);
  const Vector2d e2(0.0, kFdStep);
  return {(f_(x + e1) - f_(x - e1)) / (2 * kFdStep), (f_(x + e2) - f_(x - e2)) / (2 * kFdStep)};
}

// ---------------------------------------------------------------- Deformation

Deformation Deformation::user_supplied(Map map, Jacobian jacobian) {
  if (!map || !jacobian) throw Error(ErrorCode::InvalidArgument, "empty deformation callback");
  return Deformation(DeformationKind::UserSupplied, std::move(map), std::move(jacobian));
}

Deformation Deformation::identity() {
  return Deformation(
      DeformationKind::Identity, [](const Vector2d& x) { return x; },
      [](const Vector2d&) -> Matrix2d { return Matrix2d::Identity(); });
}

Deformation local_rotation_deformation(ScalarField alpha) {
  auto map = [alpha](const Vector2d& x) -> Vector2d {
    const double a = alpha(x);
    return {std::cos(a) * x.x() + std::sin(a) * x.y(), -std::sin(a) * x.x() + std::cos(a) * x.y()};
  };
  auto jac = [alpha, map](const Vector2d& x) -> Matrix2d {
    const double a = alpha(x);
    const Vector2d g = alpha.gradient(x);
    const Vector2d phi = map(x);
    Matrix2d J;
    J << std::cos(a) + g.x() * phi.y(), std::sin(a) + g.y() * phi.y(),
        -std::sin(a) - g.x() * phi.x(), std::cos(a) - g.y() * phi.x();
    return J;
  };
  Deformation d(DeformationKind::LocalRotation, std::move(map), std::move(jac));
  d.alpha_ = std::move(alpha);
  return d;
}

Deformation local_rotation_deformation(ScalarField::Function alpha, ScalarField::Gradient grad) {
  return local_rotation_deformation(ScalarField(std::move(alpha), std::move(grad)));
}

Deformation affine_conformal_deformation(double a, double b, double c) {
  const double norm2 = a * a + b * b;
  if (norm2 == 0.0)
    throw Error(ErrorCode::DegenerateConformal, "a = b = 0 gives the global rotation R_{-c}");
  auto map = [=](const Vector2d& x) -> Vector2d {
    const double angle = a * x.x() + b * x.y() + c;
    const double scale = std::exp(a * x.y() - b * x.x()) / norm2;
    return {scale * (a * std::sin(angle) - b * std::cos(angle)),
            scale * (a * std::cos(angle) + b * std::sin(angle))};
  };
  auto jac = [=](const Vector2d& x) -> Matrix2d {
    const double angle = a * x.x() + b * x.y() + c;
    const double scale = std::exp(a * x.y() - b * x.x());
    Matrix2d J;
    J << std::cos(angle), std::sin(angle), -std::sin(angle), std::cos(angle);
    return scale * J;
  };
  Deformation d(DeformationKind::AffineConformal, std::move(map), std::move(jac));
  d.abc_ = Eigen::Vector3d(a, b, c);
  return d;
}

Deformation conformal_or_rotation(double a, double b, double c) {
  if (a == 0.0 && b == 0.0) return local_rotation_deformation(ScalarField::constant(c));
  return affine_conformal_deformation(a, b, c);
}

// ---------------------------------------------------------------- FieldModel

FieldModel FieldModel::fbf(Hurst h) { return FieldModel(model::FBF{h.value()}); }

FieldModel FieldModel::afbf(Hurst h, double alpha0, double delta) {
  check_delta(delta);
  return FieldModel(model::AFBF{h.value(), wrap_axial(alpha0), delta});
}

FieldModel FieldModel::sum_afbf(Hurst h, double alpha0, double alpha1, double delta) {
  check_delta(delta);
  alpha0 = wrap_axial(alpha0);
  alpha1 = wrap_axial(alpha1);
  if (!(delta < std::abs(alpha1 - alpha0) / 2))
    throw Error(ErrorCode::OverlappingCones, "sum_afbf requires delta < |alpha1 - alpha0| / 2");
  return FieldModel(model::SumAFBF{h.value(), wrap_axial(alpha0), wrap_axial(alpha1), delta});
}

FieldModel FieldModel::linear_deformed(FieldModel base, const Matrix2d& L) {
  if (!base.is_self_similar())
    throw Error(ErrorCode::InvalidArgument, "linear deformation needs a self-similar base");
  const double det = L.determinant();
  if (!std::isfinite(det) || std::abs(det) <= 1e-14 * L.squaredNorm())
    throw Error(ErrorCode::NonInvertible, "linear deformation matrix is singular");
  return FieldModel(
      model::LinearDeformed{std::make_shared<const FieldModel>(std::move(base)), L});
}

FieldModel FieldModel::self_similar(Hurst h, AnisotropySpec anisotropy) {
  return FieldModel(model::SelfSimilar{h.value(), std::move(anisotropy)});
}

FieldModel FieldModel::mbf(ScalarField hurst) { return FieldModel(model::MBF{std::move(hurst)}); }

FieldModel FieldModel::gafbf(ScalarField hurst, ScalarField alpha, double delta) {
  check_delta(delta);
  return FieldModel(model::GAFBF{std::move(hurst), std::move(alpha), delta, {}});
}

FieldModel FieldModel::gafbf(ScalarField hurst, model::Amplitude amplitude) {
  if (!amplitude) throw Error(ErrorCode::InvalidArgument, "empty GAFBF amplitude");
  return FieldModel(
      model::GAFBF{std::move(hurst), ScalarField::constant(0.0), 0.0, std::move(amplitude)});
}

FieldModel FieldModel::wafbf(Deformation phi, Hurst h, double alpha0, double delta) {
  check_delta(delta);
  return FieldModel(model::WAFBF{std::move(phi), model::AFBF{h.value(), wrap_axial(alpha0), delta}});
}

const char* FieldModel::family() const {
  struct V {
    const char* operator()(const model::FBF&) const { return "fbf"; }
    const char* operator()(const model::AFBF&) const { return "afbf"; }
    const char* operator()(const model::SumAFBF&) const { return "sum_afbf"; }
    const char* operator()(const model::LinearDeformed&) const { return "linear"; }
    const char* operator()(const model::SelfSimilar&) const { return "self_similar"; }
    const char* operator()(const model::MBF&) const { return "mbf"; }
    const char* operator()(const model::GAFBF&) const { return "gafbf"; }
    const char* operator()(const model::WAFBF&) const { return "wafbf"; }
  };
  return std::visit(V{}, v_);
}

bool FieldModel::is_self_similar() const {
  return std::holds_alternative<model::FBF>(v_) || std::holds_alternative<model::AFBF>(v_) ||
         std::holds_alternative<model::SumAFBF>(v_) ||
         std::holds_alternative<model::LinearDeformed>(v_) ||
         std::holds_alternative<model::SelfSimilar>(v_);
}

double FieldModel::hurst() const {
  if (const auto* m = as<model::FBF>()) return m->hurst;
  if (const auto* m = as<model::AFBF>()) return m->hurst;
  if (const auto* m = as<model::SumAFBF>()) return m->hurst;
  if (const auto* m = as<model::LinearDeformed>()) return m->base->hurst();
  if (const auto* m = as<model::SelfSimilar>()) return m->hurst;
  throw Error(ErrorCode::InvalidArgument,
              std::string(family()) + " is not self-similar; take its tangent field first");
}

AnisotropySpec FieldModel::anisotropy() const {
  if (as<model::FBF>()) return AnisotropySpec::isotropic();
  if (const auto* m = as<model::AFBF>()) return AnisotropySpec::cone(m->alpha0, m->delta);
  if (const auto* m = as<model::SumAFBF>())
    return AnisotropySpec::sum(AnisotropySpec::cone(m->alpha0, m->delta),
                               AnisotropySpec::cone(m->alpha1, m->delta));
  if (const auto* m = as<model::LinearDeformed>())
    return AnisotropySpec::linearly_transformed(m->base->anisotropy(), Hurst(m->base->hurst()),
                                                m->L);
  if (const auto* m = as<model::SelfSimilar>()) return m->anisotropy;
  throw Error(ErrorCode::InvalidArgument,
              std::string(family()) + " is not self-similar; take its tangent field first");
}

// ---------------------------------------------------------------- local analysis

FieldModel tangent_field(const FieldModel& m, const Vector2d& x0) {
  if (m.is_self_similar()) return m;
  if (const auto* mbf = m.as<model::MBF>()) return FieldModel::fbf(Hurst(mbf->hurst(x0)));
  if (const auto* g = m.as<model::GAFBF>()) {
    const Hurst h(g->hurst(x0));
    if (!g->amplitude) return FieldModel::afbf(h, g->alpha(x0), g->delta);
    // Local anisotropy is C(x₀,·)².
    auto amplitude = g->amplitude;
    auto s = AnisotropySpec::callback([amplitude, x0](double theta) {
      const double c = amplitude(x0, theta);
      return c * c;
    });
    return FieldModel::self_similar(h, std::move(s));
  }
  const auto& w = std::get<model::WAFBF>(m.variant());
  // Y(x) = X(DΦ(x₀)x) = X(L⁻¹x) with L = DΦ(x₀)⁻¹.
  const Matrix2d L = checked_inverse(w.phi.jacobian(x0), x0);
  return FieldModel::linear_deformed(
      FieldModel::afbf(Hurst(w.base.hurst), w.base.alpha0, w.base.delta), L);
}

StructureTensord local_structure_tensor(const FieldModel& m, const Vector2d& x0, int nodes) {
  const FieldModel t = tangent_field(m, x0);
  if (t.as<model::FBF>()) return {0.5, 0.0, 0.5};
  if (const auto* a = t.as<model::AFBF>()) return afbf_tensor_closed(a->alpha0, a->delta);
  if (const auto* s = t.as<model::SumAFBF>()) {
    if (s->delta < std::abs(s->alpha1 - s->alpha0) / 2)
      return sum_afbf_tensor_closed(s->alpha0, s->alpha1, s->delta);
  }
  return structure_tensor_quadrature(t.anisotropy(), nodes);
}

OrientationResultd local_orientation(const FieldModel& m, const Vector2d& x0, double tol) {
  if (const auto* g = m.as<model::GAFBF>(); g && !g->amplitude) {
    const double alpha = g->alpha(x0);
    const double chi = sinc(2 * g->delta);
    // Cones wider than π/2 put the dominant axis across α.
    if (chi > tol) return axial_result(unit_vector(alpha), chi);
    return orientation_of(afbf_tensor_closed(alpha, g->delta), tol);
  }
  if (const auto* w = m.as<model::WAFBF>()) {
    const Matrix2d J = w->phi.jacobian(x0);
    checked_inverse(J, x0);
    const Vector2d v = J.transpose() * unit_vector(w->base.alpha0);
    // A conformal DΦ only rotates and rescales the cone.
    const Matrix2d G = J.transpose() * J;
    const double chi = sinc(2 * w->base.delta);
    if (std::abs(G(0, 0) - G(1, 1)) + 2 * std::abs(G(0, 1)) <= 1e-13 * G.trace() && chi > tol)
      return axial_result(v, chi);
    const auto tensor = orientation_of(local_structure_tensor(m, x0), tol);
    return axial_result(v, tensor.coherency);
  }
  return orientation_of(local_structure_tensor(m, x0), tol);
}

}  // namespace orifield
