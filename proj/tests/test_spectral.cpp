#include <gtest/gtest.h>

#include <random>

#include "orifield/spectral.hpp"

using namespace orifield;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST(Hurst, OpenUnitInterval) {
  EXPECT_NO_THROW(Hurst(0.5));
  EXPECT_THROW(Hurst(0.0), Error);
  EXPECT_THROW(Hurst(1.0), Error);
  EXPECT_THROW(Hurst(std::nan("")), Error);
}

TEST(Anisotropy, Isotropic) {
  EXPECT_NEAR(eval_anisotropy(AnisotropySpec::isotropic(), 1.234), 0.15915494, 1e-8);
}

TEST(Anisotropy, ConeIsEvenAndClosed) {
  const auto c = AnisotropySpec::cone(0.0, 0.3);
  // Each lobe carries half of the level 1/(2δ), so the cone has unit mass.
  EXPECT_NEAR(eval_anisotropy(c, 0.1), 0.5 / 0.6, 1e-15);
  EXPECT_EQ(eval_anisotropy(c, 0.5), 0.0);
  EXPECT_EQ(eval_anisotropy(c, kPi + 0.1), eval_anisotropy(c, 0.1));
  EXPECT_GT(eval_anisotropy(c, 0.3), 0.0);
  EXPECT_GT(eval_anisotropy(AnisotropySpec::cone(0.2, 0.3), 0.5), 0.0);
}

TEST(Anisotropy, ConeMassIsTwoDeltaLevel) {
  // 2δ·level with the default level 1/(2δ).
  const auto c = AnisotropySpec::cone(0.4, 0.3);
  const double step = 2 * kPi / 200000;
  double mass = 0;
  for (int k = 0; k < 200000; ++k) mass += eval_anisotropy(c, (k + 0.5) * step) * step;
  EXPECT_NEAR(mass, 1.0, 1e-3);
}

TEST(Anisotropy, LinearlyTransformedCone) {
  Matrix2d L = Vector2d(2, 1).asDiagonal();
  const auto s = AnisotropySpec::linearly_transformed(AnisotropySpec::cone(0, 0.3), Hurst(0.5), L);
  EXPECT_NEAR(eval_anisotropy(s, 0.0), 2 * std::pow(2.0, -3) * 0.5 / 0.6, 1e-15);
}

TEST(Anisotropy, SingularTransformThrows) {
  Matrix2d L;
  L << 1, 2, 2, 4;
  try {
    AnisotropySpec::linearly_transformed(AnisotropySpec::isotropic(), Hurst(0.5), L);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonInvertible);
  }
}

TEST(Anisotropy, RotationMovesTheCone) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  const double a0 = 0.3, t0 = 0.9;
  const auto moved = AnisotropySpec::linearly_transformed(AnisotropySpec::cone(a0, 0.2), Hurst(0.4),
                                                          rotation(t0));
  const auto expect = AnisotropySpec::cone(wrap_axial(a0 + t0), 0.2);
  int mismatches = 0;
  for (int k = 0; k < 100000; ++k) {
    const double t = u(rng);
    if (std::abs(eval_anisotropy(moved, t) - eval_anisotropy(expect, t)) > 1e-9) ++mismatches;
  }
  EXPECT_EQ(mismatches, 0);
}

TEST(Anisotropy, SumIsPointwise) {
  const auto a = AnisotropySpec::cone(0.1, 0.2);
  const auto b = AnisotropySpec::cone(1.0, 0.2);
  const auto s = AnisotropySpec::sum(a, b);
  for (double t = -3; t < 3; t += 0.01)
    EXPECT_DOUBLE_EQ(eval_anisotropy(s, t), eval_anisotropy(a, t) + eval_anisotropy(b, t));
}

TEST(Anisotropy, OverlapEmitsDiagnostic) {
  std::string seen;
  set_diagnostic_handler([&](std::string_view m) { seen = m; });
  AnisotropySpec::sum(AnisotropySpec::cone(0.1, 0.3), AnisotropySpec::cone(0.2, 0.3));
  set_diagnostic_handler(nullptr);
  EXPECT_FALSE(seen.empty());
}

TEST(Density, IsotropicValues) {
  const auto iso = AnisotropySpec::isotropic();
  EXPECT_NEAR(eval_spectral_density(iso, Hurst(0.5), {1, 0}), 0.15915494, 1e-8);
  EXPECT_NEAR(eval_spectral_density(iso, Hurst(0.5), {2, 0}), 0.019894368, 1e-9);
  try {
    eval_spectral_density(iso, Hurst(0.5), {0, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroFrequency);
  }
}

TEST(Density, HomogeneityEvennessAndTransformRule) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3, 3);
  Matrix2d L;
  L << 1.3, 0.4, -0.2, 0.8;
  const Hurst H(0.35);
  const auto base = AnisotropySpec::sum(AnisotropySpec::cone(0.2, 0.25), AnisotropySpec::isotropic());
  const auto moved = AnisotropySpec::linearly_transformed(base, H, L);
  for (int k = 0; k < 1000; ++k) {
    const Vector2d xi(u(rng), u(rng));
    const double f = eval_spectral_density(base, H, xi);
    EXPECT_DOUBLE_EQ(f, eval_spectral_density(base, H, -xi));
    const double c = 1.7;
    EXPECT_NEAR(eval_spectral_density(base, H, xi / c), std::pow(c, 2 * H.value() + 2) * f, 1e-12 * f * 10);
    const double g = std::abs(L.determinant()) * eval_spectral_density(base, H, L.transpose() * xi);
    EXPECT_NEAR(eval_spectral_density(moved, H, xi), g, 1e-12 * std::max(1.0, g));
  }
}

TEST(Breakpoints, ConeEdgesOnBothLobes) {
  const auto b = breakpoints(AnisotropySpec::cone(0.0, 0.3));
  ASSERT_EQ(b.size(), 4u);
  EXPECT_NEAR(b[0], 0.3, 1e-15);
  EXPECT_NEAR(b[3], 2 * kPi - 0.3, 1e-15);
}
