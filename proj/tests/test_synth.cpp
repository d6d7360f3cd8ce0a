#include <gtest/gtest.h>

#include <cstring>

#include "orifield/monogenic.hpp"
#include "orifield/synth.hpp"

using namespace orifield;

namespace {

constexpr double kPi = std::numbers::pi;

bool identical(const Raster& a, const Raster& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), std::size_t(a.size()) * sizeof(double)) == 0;
}

// Slope of log₂ E|X(x+h) − X(x)|² against log₂ h over horizontal and vertical lags.
double variogram_slope(const Raster& X, double spacing) {
  std::vector<double> lx, ly;
  for (int lag = 1; lag <= 16; lag *= 2) {
    double sum = 0;
    long count = 0;
    for (int r = 0; r < X.rows() - lag; ++r)
      for (int c = 0; c < X.cols() - lag; ++c) {
        sum += std::pow(X(r, c + lag) - X(r, c), 2) + std::pow(X(r + lag, c) - X(r, c), 2);
        count += 2;
      }
    lx.push_back(std::log2(lag * spacing));
    ly.push_back(std::log2(sum / count));
  }
  const double n = double(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sx += lx[k];
    sy += ly[k];
    sxx += lx[k] * lx[k];
    sxy += lx[k] * ly[k];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST(Grid, Validation) {
  EXPECT_NO_THROW((Grid{64, 0, 1}.validate()));
  EXPECT_THROW((Grid{60, 0, 1}.validate()), Error);
  EXPECT_THROW((Grid{64, 1, 1}.validate()), Error);
}

TEST(Ssi, DeterministicRealAndAnchored) {
  const FieldModel m = FieldModel::afbf(Hurst(0.5), 0.0, 0.3);
  const Grid g{128, 0, 1};
  const auto a = synthesize_ssi(m, g, 7);
  const auto b = synthesize_ssi(m, g, 7);
  EXPECT_TRUE(identical(a.values, b.values));
  EXPECT_FALSE(identical(a.values, synthesize_ssi(m, g, 8).values));
  EXPECT_EQ(a.values(0, 0), 0.0);
  EXPECT_LE(a.params.imag_residue, 1e-12);
  EXPECT_TRUE(a.values.allFinite());
  EXPECT_EQ(a.params.method, "ssi");
}

TEST(Ssi, OriginInsideTheDomain) {
  const Grid g{64, -1, 1};
  const auto a = synthesize_ssi(FieldModel::fbf(Hurst(0.3)), g, 1);
  EXPECT_EQ(a.values(32, 32), 0.0);
}

TEST(Ssi, FrequencyGridChecks) {
  const FieldModel m = FieldModel::fbf(Hurst(0.5));
  const Grid g{64, 0, 1};
  for (int bad : {32, 96}) {
    try {
      synthesize_ssi(m, g, 1, bad);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidFrequencyGrid);
    }
  }
  EXPECT_NO_THROW(synthesize_ssi(m, g, 1, 128));
}

TEST(Ssi, NeedsASelfSimilarModel) {
  EXPECT_THROW(synthesize_ssi(FieldModel::mbf(ScalarField::constant(0.5)), Grid{64, 0, 1}, 1), Error);
}

TEST(Ssi, FbfVariogramSlope) {
  const Grid g{512, 0, 1};
  double mean = 0;
  for (int s = 0; s < 10; ++s)
    mean += variogram_slope(synthesize_ssi(FieldModel::fbf(Hurst(0.5)), g, 100 + s).values, g.spacing());
  EXPECT_NEAR(mean / 10, 1.0, 0.2);
}

TEST(Ssi, SlopeSurvivesDomainDoubling) {
  const Grid unit{256, 0, 1}, twice{256, 0, 2};
  double a = 0, b = 0;
  for (int s = 0; s < 5; ++s) {
    a += variogram_slope(synthesize_ssi(FieldModel::fbf(Hurst(0.3)), unit, s).values, unit.spacing());
    b += variogram_slope(synthesize_ssi(FieldModel::fbf(Hurst(0.3)), twice, s).values, twice.spacing());
  }
  EXPECT_NEAR(a / 5, 0.6, 0.2);
  EXPECT_NEAR(b / 5, 0.6, 0.2);
}

TEST(Ssi, ThreadCountDoesNotMatter) {
  const FieldModel m = FieldModel::sum_afbf(Hurst(0.4), -0.5, 0.7, 0.2);
  const Grid g{128, 0, 1};
  SynthOptions one, four;
  one.threads = 1;
  four.threads = 4;
  EXPECT_TRUE(identical(synthesize_ssi(m, g, 9, 256, one).values, synthesize_ssi(m, g, 9, 256, four).values));
}

TEST(Direct, CallbackConeReproducesSpectralSynthesis) {
  const Grid g{32, 0, 1};
  const auto cone = AnisotropySpec::cone(0.4, 0.3);
  const FieldModel direct = FieldModel::gafbf(ScalarField::constant(0.5), [cone](const Vector2d&, double t) {
    return std::sqrt(eval_anisotropy(cone, t));
  });
  const auto a = synthesize_gafbf(direct, g, 5, 32);
  const auto b = synthesize_ssi(FieldModel::afbf(Hurst(0.5), 0.4, 0.3), g, 5, 32);
  EXPECT_LE((a.values - b.values).cwiseAbs().maxCoeff(), 1e-10 * b.values.cwiseAbs().maxCoeff());
}

TEST(Direct, ConstantHurstMbfReproducesFbf) {
  const Grid g{32, 0, 1};
  const auto a = synthesize_gafbf(FieldModel::mbf(ScalarField::constant(0.6)), g, 3, 32);
  const auto b = synthesize_ssi(FieldModel::fbf(Hurst(0.6)), g, 3, 32);
  EXPECT_LE((a.values - b.values).cwiseAbs().maxCoeff(), 1e-10 * b.values.cwiseAbs().maxCoeff());
}

TEST(Direct, BudgetAndDeterminism) {
  const FieldModel m = FieldModel::gafbf(ScalarField::constant(0.5), ScalarField::constant(0.0), 0.3);
  SynthOptions tight;
  tight.max_direct_ops = 1000;
  try {
    synthesize_gafbf(m, Grid{64, 0, 1}, 1, 64, tight);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BudgetExceeded);
  }
  SynthOptions one, three;
  one.threads = 1;
  three.threads = 3;
  EXPECT_TRUE(identical(synthesize_gafbf(m, Grid{64, 0, 1}, 4, 32, one).values,
                        synthesize_gafbf(m, Grid{64, 0, 1}, 4, 32, three).values));
}

TEST(Direct, ContinuousAcrossConeEdges) {
  // α sweeps slowly, so neighbouring pixels see nearly the same cone.
  ScalarExpr e;
  e.c = -kPi / 2;
  e.a1 = 1;
  const FieldModel m = FieldModel::gafbf(ScalarField::constant(0.5), ScalarField::expression(e), 0.3);
  const Raster X = synthesize_gafbf(m, Grid{128, 0, 1}, 2, 64).values;
  double jump = 0, typical = 0;
  for (int r = 0; r < 128; ++r)
    for (int c = 0; c + 1 < 128; ++c) {
      const double d = std::abs(X(r, c + 1) - X(r, c));
      jump = std::max(jump, d);
      typical += d;
    }
  typical /= 128.0 * 127;
  EXPECT_LT(jump, 12 * typical);
}

TEST(Warp, IdentityMatchesSpectralSynthesis) {
  const Grid g{64, 0, 1};
  const auto w = synthesize_wafbf(Deformation::identity(), {0.5, 0.2, 0.3}, g, 11, 0.0,
                                  Interpolation::Bilinear, 64);
  const auto s = synthesize_ssi(FieldModel::afbf(Hurst(0.5), 0.2, 0.3), g, 11);
  EXPECT_LE((w.values - s.values).cwiseAbs().maxCoeff(), 1e-10);
  const auto c = synthesize_wafbf(Deformation::identity(), {0.5, 0.2, 0.3}, g, 11, 0.0,
                                  Interpolation::Bicubic, 64);
  EXPECT_LE((c.values - s.values).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Warp, GlobalRotationTurnsTheTexture) {
  const Deformation phi = local_rotation_deformation(ScalarField::constant(-kPi / 3));
  const FieldModel model = FieldModel::wafbf(phi, Hurst(0.5), 0.0, 0.3);
  const auto w = synthesize_wafbf(phi, {0.5, 0.0, 0.3}, Grid{256, 0, 1}, 21);
  const int scales[] = {1};
  // The warped raster is not periodic; analyze its periodic component.
  const auto pyr = wavelet_pyramid(periodic_component(w.values), scales, RadialProfile::simoncelli(), 1);
  const double angle = orientation_of(empirical_structure_tensor(pyr, 1)).angle;
  EXPECT_LT(axial_distance(angle, local_orientation(model, {0.5, 0.5}).angle), 3 * kPi / 180);
  EXPECT_EQ(w.params.method, "warp");
  ASSERT_TRUE(w.params.base_grid.has_value());
  EXPECT_GE(w.params.base_grid->n, 1024);
}

TEST(Warp, EscapingDeformationThrows) {
  const Deformation wild = Deformation::user_supplied(
      [](const Vector2d& x) -> Vector2d { return x.x() > 0.9 ? Vector2d(NAN, 0) : x; },
      [](const Vector2d&) -> Matrix2d { return Matrix2d::Identity(); });
  try {
    synthesize_wafbf(wild, {0.5, 0, 0.3}, Grid{32, 0, 1}, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DomainEscape);
  }
}

TEST(Dispatch, PicksTheMethodFromTheFamily) {
  const Grid g{32, 0, 1};
  EXPECT_EQ(synthesize(FieldModel::fbf(Hurst(0.5)), g, 1).params.method, "ssi");
  EXPECT_EQ(synthesize(FieldModel::mbf(ScalarField::constant(0.5)), g, 1, 32).params.method, "direct");
  EXPECT_EQ(synthesize(FieldModel::wafbf(Deformation::identity(), Hurst(0.5), 0, 0.3), g, 1).params.method,
            "warp");
}
