#include <gtest/gtest.h>

#include <random>

#include "orifield/fields.hpp"
#include "orifield/monogenic.hpp"

using namespace orifield;

namespace {

constexpr double kPi = std::numbers::pi;

Matrix2d central_jacobian(const Deformation& phi, const Vector2d& x, double h = 1e-6) {
  Matrix2d J;
  J.col(0) = (phi(x + Vector2d(h, 0)) - phi(x - Vector2d(h, 0))) / (2 * h);
  J.col(1) = (phi(x + Vector2d(0, h)) - phi(x - Vector2d(0, h))) / (2 * h);
  return J;
}

ScalarExpr affine(double c, double a1, double a2 = 0, double q1 = 0, double q2 = 0) {
  ScalarExpr e;
  e.c = c;
  e.a1 = a1;
  e.a2 = a2;
  e.q1 = q1;
  e.q2 = q2;
  return e;
}

}  // namespace

TEST(ScalarField, NumericGradientFallback) {
  const ScalarField f([](const Vector2d& x) { return std::sin(x.x()) * x.y(); });
  EXPECT_FALSE(f.has_analytic_gradient());
  const Vector2d g = f.gradient({0.3, 2.0});
  EXPECT_NEAR(g.x(), std::cos(0.3) * 2.0, 1e-8);
  EXPECT_NEAR(g.y(), std::sin(0.3), 1e-8);
}

TEST(Tangent, MbfIsFbf) {
  const FieldModel m = FieldModel::mbf(ScalarField::expression(affine(0.3, 0.8)));
  const FieldModel t = tangent_field(m, {0.5, 0.1});
  ASSERT_NE(t.as<model::FBF>(), nullptr);
  EXPECT_NEAR(t.hurst(), 0.7, 1e-15);
  EXPECT_TRUE(local_orientation(m, {0.2, 0.2}).degenerate);
}

TEST(Tangent, GafbfIsAfbf) {
  const FieldModel m = FieldModel::gafbf(ScalarField::constant(0.4), ScalarField::expression(affine(-kPi / 2, 1)), 0.3);
  const FieldModel t = tangent_field(m, {0.5, 0.9});
  const auto* a = t.as<model::AFBF>();
  ASSERT_NE(a, nullptr);
  EXPECT_NEAR(a->alpha0, -kPi / 2 + 0.5, 1e-15);
  EXPECT_NEAR(a->hurst, 0.4, 1e-15);
  const auto o = local_orientation(m, {0.5, 0.9});
  EXPECT_NEAR(o.direction.x(), std::cos(-kPi / 2 + 0.5), 1e-12);
  EXPECT_NEAR(o.direction.y(), std::sin(-kPi / 2 + 0.5), 1e-12);
}

TEST(Tangent, GafbfMatchesQuadratureForNarrowCones) {
  const double delta = 0.05;
  const FieldModel m = FieldModel::gafbf(ScalarField::constant(0.5), ScalarField::expression(affine(0.2, 1.3, -0.4)), delta);
  for (const Vector2d x : {Vector2d(0.1, 0.2), Vector2d(0.7, -0.3), Vector2d(-1, 1)}) {
    const auto q = orientation_of(structure_tensor_quadrature(tangent_field(m, x).anisotropy()));
    EXPECT_LE(std::abs(wrap_axial(q.angle - local_orientation(m, x).angle)), 5 * delta * delta);
  }
}

TEST(Tangent, WideConeTurnsTheAxis) {
  const FieldModel m = FieldModel::gafbf(ScalarField::constant(0.5), ScalarField::constant(0.2), 2.0);
  const auto o = local_orientation(m, {0, 0});
  EXPECT_NEAR(std::abs(wrap_axial(o.angle - 0.2)), kPi / 2, 1e-12);
  EXPECT_NEAR(o.coherency, std::abs(sinc(4.0)), 1e-12);
}

TEST(Tangent, IdentityWarpIsTheBase) {
  const FieldModel m = FieldModel::wafbf(Deformation::identity(), Hurst(0.5), 0.4, 0.3);
  for (const Vector2d x : {Vector2d(0, 0), Vector2d(0.3, -2)}) {
    EXPECT_NEAR(local_orientation(m, x).angle, 0.4, 1e-14);
    const auto J = local_structure_tensor(m, x);
    const auto K = afbf_tensor_closed(0.4, 0.3);
    EXPECT_NEAR(J.j12, K.j12, 1e-9);
  }
}

TEST(LocalRotation, ConstantAngleIsARotation) {
  const Deformation phi = local_rotation_deformation(ScalarField::constant(-kPi / 3));
  const Vector2d x(0.3, 0.8);
  EXPECT_LT((phi(x) - rotation(kPi / 3) * x).norm(), 1e-15);
  EXPECT_NEAR(phi.jacobian(x).determinant(), 1.0, 1e-14);
}

TEST(LocalRotation, DeterminantFormulaAndJacobian) {
  const Deformation phi = local_rotation_deformation(ScalarField::expression(affine(-kPi / 2, 1)));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 100; ++k) {
    const Vector2d x(u(rng), u(rng));
    const Matrix2d J = phi.jacobian(x);
    EXPECT_NEAR(J.determinant(), 1 + x.y(), 1e-12);
    EXPECT_LE((central_jacobian(phi, x) - J).cwiseAbs().maxCoeff(), 1e-5 * std::max(1.0, J.norm()));
  }
}

TEST(LocalRotation, SingularWhereConditionFails) {
  // det = 1 + x₂ vanishes on x₂ = −1.
  const FieldModel m = FieldModel::wafbf(
      local_rotation_deformation(ScalarField::expression(affine(-kPi / 2, 1))), Hurst(0.5), 0, 0.3);
  try {
    local_orientation(m, {0.4, -1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularJacobian);
  }
  EXPECT_NO_THROW(local_orientation(m, {0.4, -0.9}));
}

TEST(LocalRotation, OrientationIsNotPrescribed) {
  const ScalarExpr e = affine(-kPi / 2, 0, -1, 1);  // α = −π/2 + x₁² − x₂
  const FieldModel m = FieldModel::wafbf(local_rotation_deformation(ScalarField::expression(e)),
                                         Hurst(0.5), 0, 0.3);
  for (const Vector2d x : {Vector2d(0.2, 0.3), Vector2d(0.8, 0.5)}) {
    const Vector2d u = unit_vector(e(x));
    const Vector2d perp(-u.y(), u.x());
    const Vector2d expect = (u + perp.dot(x) * e.gradient(x)).normalized();
    const Vector2d got = local_orientation(m, x).direction;
    EXPECT_LT(std::min((got - expect).norm(), (got + expect).norm()), 1e-12);
  }
}

TEST(Conformal, Examples) {
  const Deformation phi = affine_conformal_deformation(2, -1, 0);
  EXPECT_LT((phi({0, 0}) - Vector2d(0.2, 0.4)).norm(), 1e-15);
  EXPECT_LT((phi.jacobian({0, 0}) - Matrix2d::Identity()).norm(), 1e-15);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 100; ++k) {
    const Vector2d x(u(rng), u(rng));
    const Vector2d d = (phi.jacobian(x).transpose() * Vector2d::UnitX()).normalized();
    EXPECT_LT((d - unit_vector(2 * x.x() - x.y())).norm(), 1e-12);
  }
}

TEST(Conformal, CoherencyMatchesQuadrature) {
  const FieldModel m = FieldModel::wafbf(affine_conformal_deformation(2, -1, 0), Hurst(0.5), 0.2, 0.3);
  for (const Vector2d x : {Vector2d(0.1, 0.2), Vector2d(-0.6, 0.7)}) {
    const auto fast = local_orientation(m, x);
    const auto full = orientation_of(local_structure_tensor(m, x));
    EXPECT_NEAR(fast.coherency, full.coherency, 1e-10);
    EXPECT_LT(axial_distance(fast.angle, full.angle), 1e-10);
  }
}

TEST(Conformal, DegenerateFallsBack) {
  try {
    affine_conformal_deformation(0, 0, 0.3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateConformal);
  }
  const Deformation phi = conformal_or_rotation(0, 0, 0.3);
  EXPECT_LT((phi({1, 0}) - rotation(-0.3) * Vector2d(1, 0)).norm(), 1e-15);
}

TEST(Models, ParameterValidation) {
  EXPECT_THROW(FieldModel::afbf(Hurst(0.5), 0, 0), Error);
  EXPECT_THROW(FieldModel::afbf(Hurst(0.5), 0, 4), Error);
  EXPECT_THROW(FieldModel::sum_afbf(Hurst(0.5), 0, 0.2, 0.3), Error);
  EXPECT_EQ(std::string(FieldModel::fbf(Hurst(0.5)).family()), "fbf");
}
