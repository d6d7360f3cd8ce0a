#include "orifield/validation.hpp"

#include <chrono>
#include <cstring>
#include <iomanip>
#include <random>
#include <sstream>

#include "orifield/fft.hpp"
#include "orifield/monogenic.hpp"
#include "orifield/parallel.hpp"
#include "orifield/synth.hpp"

namespace orifield {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = 180.0 / kPi;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 4) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

// Distance between unit vectors up to sign.
double axial_vector_error(const Vector2d& a, const Vector2d& b) {
  return std::min((a - b).norm(), (a + b).norm());
}

double max_abs(const Raster& m) { return m.cwiseAbs().maxCoeff(); }

Raster random_image(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> normal;
  Raster f(n, n);
  for (Eigen::Index k = 0; k < f.size(); ++k) f.data()[k] = normal(rng);
  return f;
}

// f(R⁻¹x) on the periodic lattice for a quarter turn R.
Raster rotate_quarter(const Raster& f) {
  const int n = int(f.rows());
  Raster g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = f((n - j) % n, i);
  return g;
}

bool bit_identical(const Raster& a, const Raster& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), std::size_t(a.size()) * sizeof(double)) == 0;
}

}  // namespace

// ---------------------------------------------------------------- report

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

void SuiteReport::add(std::string name, double value, double tolerance, std::string detail) {
  checks.push_back({std::move(name), std::isfinite(value) && value <= tolerance, value, tolerance,
                    std::move(detail)});
}

void SuiteReport::add_bool(std::string name, bool ok, std::string detail) {
  checks.push_back({std::move(name), ok, ok ? 0.0 : 1.0, 0.0, std::move(detail)});
}

void SuiteReport::append(const SuiteReport& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
  seconds += other.seconds;
}

Json to_json(const SuiteReport& report) {
  Json checks = Json::array();
  for (const CheckResult& c : report.checks) {
    Json j = {{"name", c.name},
              {"pass", c.pass},
              {"value", round12(c.value)},
              {"tolerance", round12(c.tolerance)}};
    if (!c.detail.empty()) j["detail"] = c.detail;
    checks.push_back(std::move(j));
  }
  return {{"suite", report.suite},
          {"pass", report.passed()},
          {"seconds", round12(report.seconds)},
          {"checks", std::move(checks)}};
}

// ---------------------------------------------------------------- tensors

SuiteReport closed_form_checks(const ValidationOptions&) {
  const auto t0 = Clock::now();
  SuiteReport rep{"closedform", {}, 0};
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> angle(-kPi / 2, kPi / 2);

  const StructureTensord fbf = local_structure_tensor(FieldModel::fbf(Hurst(0.5)), {0.3, 0.7});
  rep.add("fbf tensor equals I/2 exactly",
          std::max({std::abs(fbf.j11 - 0.5), std::abs(fbf.j12), std::abs(fbf.j22 - 0.5)}), 0.0);
  const StructureTensord iso = structure_tensor_quadrature(AnisotropySpec::isotropic());
  rep.add("isotropic quadrature equals I/2",
          std::max({std::abs(iso.j11 - 0.5), std::abs(iso.j12), std::abs(iso.j22 - 0.5)}), 1e-13);

  std::uniform_real_distribution<double> wide(0.01, kPi - 0.01);
  double tensor_err = 0;
  for (int k = 0; k < 50; ++k) {
    const double a = angle(rng);
    const double d = wide(rng);
    const StructureTensord q = structure_tensor_quadrature(AnisotropySpec::cone(a, d));
    const StructureTensord c = afbf_tensor_closed(a, d);
    tensor_err = std::max({tensor_err, std::abs(q.j11 - c.j11), std::abs(q.j12 - c.j12),
                           std::abs(q.j22 - c.j22)});
  }
  rep.add("afbf quadrature vs closed form, 50 random cones", tensor_err, 1e-8);

  std::uniform_real_distribution<double> narrow(0.01, kPi / 2 - 0.01);
  double coherency_err = 0;
  for (int k = 0; k < 50; ++k) {
    const double d = narrow(rng);
    const auto o = orientation_of(structure_tensor_quadrature(AnisotropySpec::cone(angle(rng), d)));
    coherency_err = std::max(coherency_err, std::abs(o.coherency - std::sin(2 * d) / (2 * d)));
  }
  rep.add("afbf coherency equals sin(2d)/(2d)", coherency_err, 1e-10);

  const StructureTensord lim = afbf_tensor_limit(0.4);
  const StructureTensord near = afbf_tensor_closed(0.4, 1e-7);
  rep.add("afbf tends to the rank-1 projector as d -> 0",
          std::max({std::abs(lim.j11 - near.j11), std::abs(lim.j12 - near.j12),
                    std::abs(lim.j22 - near.j22)}),
          1e-12);

  {
    const double a0 = kPi / 6, a1 = kPi / 3, d = 0.1;
    const auto spec = AnisotropySpec::sum(AnisotropySpec::cone(a0, d), AnisotropySpec::cone(a1, d));
    const auto o = orientation_of(structure_tensor_quadrature(spec));
    rep.add("sum of cones at pi/6 and pi/3 is oriented at pi/4", axial_distance(o.angle, kPi / 4),
            1e-10);
    rep.add("sum coherency equals sinc(2d)cos(a0-a1)",
            std::abs(o.coherency - sinc(2 * d) * std::cos(a0 - a1)), 1e-10);
  }
  double sum_angle = 0, sum_coh = 0, sum_tensor = 0;
  std::uniform_real_distribution<double> gap(0.2, kPi / 2 - 0.2);
  for (int k = 0; k < 20; ++k) {
    const double a0 = angle(rng);
    const double a1 = a0 + gap(rng);
    const double d = std::uniform_real_distribution<double>(0.01, (a1 - a0) / 2 - 0.01)(rng);
    const auto spec = AnisotropySpec::sum(AnisotropySpec::cone(a0, d), AnisotropySpec::cone(a1, d));
    const StructureTensord q = structure_tensor_quadrature(spec);
    const StructureTensord c = sum_afbf_tensor_closed(a0, a1, d);
    const auto o = orientation_of(q);
    sum_angle = std::max(sum_angle, axial_distance(o.angle, 0.5 * (a0 + a1)));
    sum_coh = std::max(sum_coh, std::abs(o.coherency - sinc(2 * d) * std::cos(a0 - a1)));
    sum_tensor = std::max({sum_tensor, std::abs(q.j11 - c.j11), std::abs(q.j12 - c.j12),
                           std::abs(q.j22 - c.j22)});
  }
  rep.add("sum orientation is the half angle, 20 random pairs", sum_angle, 1e-10);
  rep.add("sum coherency, 20 random pairs", sum_coh, 1e-10);
  rep.add("sum quadrature vs closed form, 20 random pairs", sum_tensor, 1e-8);

  rep.seconds = seconds_since(t0);
  rep.add("runtime under 5 s", rep.seconds, 5.0, fmt(rep.seconds) + " s");
  return rep;
}

SuiteReport deformation_checks(const ValidationOptions&) {
  const auto t0 = Clock::now();
  SuiteReport rep{"closedform", {}, 0};
  std::mt19937_64 rng(20240602);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::uniform_real_distribution<double> stretch(0.25, 4.0);

  double rot = 0, refl = 0, diag = 0;
  for (int k = 0; k < 20; ++k) {
    const double a0 = angle(rng);
    const double t = angle(rng);
    const Vector2d n = unit_vector(a0);
    rot = std::max(rot, axial_vector_error(deformed_orientation(n, rotation(t)),
                                           unit_vector(a0 + t)));
    Matrix2d R;
    R << std::cos(t), std::sin(t), std::sin(t), -std::cos(t);
    refl = std::max(refl, axial_vector_error(deformed_orientation(n, R), unit_vector(t - a0)));
    const double l1 = stretch(rng), l2 = stretch(rng);
    const Vector2d expect = Vector2d(l2 * std::cos(a0), l1 * std::sin(a0)).normalized();
    diag = std::max(diag, axial_vector_error(deformed_orientation(n, Matrix2d(Vector2d(l1, l2).asDiagonal())),
                                             expect));
  }
  rep.add("rotation L = R(t): orientation a0 + t", rot, 1e-12);
  rep.add("reflection L: orientation t - a0", refl, 1e-12);
  rep.add("diagonal L: orientation of (l2 cos a0, l1 sin a0)", diag, 1e-12);

  // Random invertible L with condition number at most 4, built from its SVD.
  constexpr double delta = 0.02;
  double worst = 0;
  std::uniform_real_distribution<double> sv(0.5, 2.0);
  std::uniform_real_distribution<double> hurst(0.1, 0.9);
  for (int k = 0; k < 20; ++k) {
    Matrix2d D = Matrix2d::Zero();
    D(0, 0) = sv(rng);
    D(1, 1) = sv(rng);
    Matrix2d V = rotation(angle(rng));
    if (k % 2) V.col(1) *= -1;
    const Matrix2d L = rotation(angle(rng)) * D * V.transpose();
    const double a0 = angle(rng) / 2;
    const Hurst H(hurst(rng));
    const auto spec = AnisotropySpec::linearly_transformed(AnisotropySpec::cone(a0, delta), H, L);
    const auto o = orientation_of(structure_tensor_quadrature(spec));
    const Vector2d n = deformed_orientation(unit_vector(a0), L);
    worst = std::max(worst, axial_distance(o.angle, std::atan2(n.y(), n.x())));
  }
  rep.add("transformed narrow cone follows (L^-1)^T n, 20 random L", worst, 5 * delta * delta,
          "max " + fmt(worst) + " rad");

  rep.seconds = seconds_since(t0);
  rep.add("runtime under 30 s", rep.seconds, 30.0, fmt(rep.seconds) + " s");
  return rep;
}

SuiteReport conformal_checks(const ValidationOptions&) {
  const auto t0 = Clock::now();
  SuiteReport rep{"closedform", {}, 0};
  std::mt19937_64 rng(20240603);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);

  {
    const Deformation phi = affine_conformal_deformation(2, -1, 0);
    const Vector2d p = phi({0, 0});
    rep.add("(2,-1,0): phi(0) = (0.2, 0.4)", (p - Vector2d(0.2, 0.4)).norm(), 1e-15);
    rep.add("(2,-1,0): Dphi(0) = I", (phi.jacobian({0, 0}) - Matrix2d::Identity()).norm(), 1e-15);
  }

  double fd = 0, dir = 0, orient = 0;
  for (int family = 0; family < 5; ++family) {
    double a = 2, b = -1, c = 0;
    if (family > 0) {
      a = coef(rng);
      b = coef(rng);
      c = kPi * coord(rng);
    }
    const Deformation phi = affine_conformal_deformation(a, b, c);
    const FieldModel model = FieldModel::wafbf(phi, Hurst(0.5), 0.0, 0.3);
    for (int k = 0; k < 1000; ++k) {
      const Vector2d x(coord(rng), coord(rng));
      const Matrix2d J = phi.jacobian(x);
      constexpr double h = 1e-5;
      Matrix2d num;
      num.col(0) = (phi(x + Vector2d(h, 0)) - phi(x - Vector2d(h, 0))) / (2 * h);
      num.col(1) = (phi(x + Vector2d(0, h)) - phi(x - Vector2d(0, h))) / (2 * h);
      fd = std::max(fd, (num - J).cwiseAbs().maxCoeff() / std::max(1.0, J.cwiseAbs().maxCoeff()));
      const double alpha = a * x.x() + b * x.y() + c;
      dir = std::max(dir, ((J.transpose() * Vector2d::UnitX()).normalized() - unit_vector(alpha)).norm());
      orient = std::max(orient, axial_distance(local_orientation(model, x).angle, alpha));
    }
  }
  rep.add("conformal Jacobian vs central differences", fd, 1e-5);
  rep.add("Dphi^T e1 points along alpha(x)", dir, 1e-10);
  rep.add("warped field local orientation equals alpha(x) mod pi", orient, 1e-10);

  rep.seconds = seconds_since(t0);
  rep.add("runtime under 5 s", rep.seconds, 5.0, fmt(rep.seconds) + " s");
  return rep;
}

// ---------------------------------------------------------------- frame, Riesz

SuiteReport frame_checks(const ValidationOptions& opts) {
  const auto t0 = Clock::now();
  SuiteReport rep{"frame", {}, 0};
  constexpr int kPoints = 100000;
  for (const RadialProfile& p : {RadialProfile::simoncelli(), RadialProfile::meyer()}) {
    double worst = 0, outside = 0;
    for (int k = 1; k <= kPoints; ++k) {
      const double lambda = kPi * k / kPoints;
      double s = 0;
      for (int j = -2; j < 64; ++j) {
        const double v = p(std::ldexp(lambda, j));
        s += v * v;
      }
      worst = std::max(worst, std::abs(s - 1));
      outside = std::max(outside, std::abs(p(kPi * (1 + double(k) / kPoints))));
    }
    rep.add(std::string(p.name()) + " partition of unity", worst, 1e-12);
    rep.add(std::string(p.name()) + " vanishes above pi", outside, 0.0);
  }

  std::mt19937_64 rng(20240604);
  constexpr int n = 256;
  std::vector<int> scales;
  for (int i = 0; i <= max_scale(n); ++i) scales.push_back(i);
  for (const RadialProfile& p : {RadialProfile::simoncelli(), RadialProfile::meyer()}) {
    const Raster f = random_image(rng, n);
    const WaveletPyramid pyr = wavelet_pyramid(f, scales, p, opts.threads);
    double iso = 0, rz = 0;
    for (const PyramidScale& s : pyr.scales) {
      iso += s.iso.squaredNorm();
      rz += s.r1.squaredNorm() + s.r2.squaredNorm();
    }
    // Spectral energy weighted by Σ_i φ(2^i‖ξ‖)², summed here independently.
    const ComplexRaster F = fft2(f);
    double weighted = 0;
    for (int k2 = 0; k2 < n; ++k2)
      for (int k1 = 0; k1 < n; ++k1) {
        const double r = 2 * kPi / n * std::hypot(signed_index(k1, n), signed_index(k2, n));
        double w = 0;
        for (int i : scales) w += std::pow(p(std::ldexp(r, i)), 2);
        weighted += w * std::norm(F(k2, k1));
      }
    weighted /= double(n) * n;
    const std::string name = p.name();
    rep.add(name + " pyramid energy equals bandpassed energy",
            std::abs(iso - pyr.bandpassed_energy) / pyr.bandpassed_energy, 1e-8);
    rep.add(name + " pyramid energy equals weighted spectral energy",
            std::abs(iso - weighted) / weighted, 1e-8);
    rep.add(name + " Riesz channels carry the same energy", std::abs(rz - iso) / iso, 1e-8);
  }

  // Tone at λ = π/2^{i+1} is seen by scale i only.
  {
    const int i = 2;
    const int m = n >> (i + 2);
    Raster f(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) f(r, c) = std::cos(2 * kPi * m * c / n + 0.3);
    const WaveletPyramid pyr = wavelet_pyramid(f, scales, RadialProfile::simoncelli(), opts.threads);
    double inside = 0, leak = 0;
    for (const PyramidScale& s : pyr.scales)
      (s.scale == i ? inside : leak) += s.iso.squaredNorm();
    rep.add("tone inside one band leaks nowhere else", leak / inside, 1e-10);
  }

  rep.seconds = seconds_since(t0);
  rep.add("runtime under 60 s", rep.seconds, 60.0, fmt(rep.seconds) + " s");
  return rep;
}

SuiteReport riesz_checks(const ValidationOptions& opts) {
  const auto t0 = Clock::now();
  SuiteReport rep{"riesz", {}, 0};
  std::mt19937_64 rng(20240605);
  constexpr int n = 256;

  double unitary = 0;
  for (int k = 0; k < 20; ++k) {
    Raster f = random_image(rng, n);
    f.array() -= f.mean();
    // The three self-conjugate Nyquist checkerboards have no Riesz image.
    for (int pattern = 1; pattern <= 3; ++pattern) {
      Raster q(n, n);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
          q(r, c) = ((pattern & 1 ? c : 0) + (pattern & 2 ? r : 0)) % 2 ? -1.0 : 1.0;
      f -= (f.cwiseProduct(q).sum() / double(q.size())) * q;
    }
    const RieszPair R = riesz_transform(f, opts.threads);
    const double lhs = R.r1.squaredNorm() + R.r2.squaredNorm();
    unitary = std::max(unitary, std::abs(lhs - f.squaredNorm()) / f.squaredNorm());
  }
  rep.add("unitarity on 20 random mean-zero images", unitary, 1e-10);

  {
    const Raster f = random_image(rng, n);
    const RieszPair R = riesz_transform(f, opts.threads);
    Raster g = f;
    Raster a = R.r1, b = R.r2;
    double steer = 0;
    for (int quarter = 1; quarter <= 3; ++quarter) {
      g = rotate_quarter(g);
      // Rotate the vector field: positions by R, components by R.
      const Raster a_rot = rotate_quarter(a), b_rot = rotate_quarter(b);
      a = -b_rot;
      b = a_rot;
      const RieszPair Rg = riesz_transform(g, opts.threads);
      steer = std::max({steer, max_abs(Rg.r1 - a), max_abs(Rg.r2 - b)});
    }
    rep.add("steerability under quarter turns", steer, 1e-10);
  }

  {
    const Raster f = random_image(rng, n);
    Raster shifted(n, n);
    const int dr = 17, dc = 101;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) shifted((r + dr) % n, (c + dc) % n) = f(r, c);
    const RieszPair R = riesz_transform(f, opts.threads);
    const RieszPair Rs = riesz_transform(shifted, opts.threads);
    double err = 0;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        err = std::max({err, std::abs(Rs.r1((r + dr) % n, (c + dc) % n) - R.r1(r, c)),
                        std::abs(Rs.r2((r + dr) % n, (c + dc) % n) - R.r2(r, c))});
    rep.add("commutes with circular translation", err, 1e-12);
  }

  {
    const int m1 = 5, m2 = -12;
    const Vector2d xi = Vector2d(m1, m2) * (2 * kPi / n);
    Raster f(n, n), s(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        const double t = xi.x() * c + xi.y() * r;
        f(r, c) = std::cos(t);
        s(r, c) = std::sin(t);
      }
    const RieszPair R = riesz_transform(f, opts.threads);
    const Vector2d u = xi.normalized();
    rep.add("pure tone: R f = -(xi/|xi|) sin",
            std::max(max_abs(R.r1 + u.x() * s), max_abs(R.r2 + u.y() * s)), 1e-10);
    const MonogenicComponents mc = monogenic_components(f, opts.threads);
    double orient = 0;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        if (mc.valid(r, c))
          orient = std::max(orient, axial_vector_error({mc.n1(r, c), mc.n2(r, c)}, u));
    rep.add("pure tone: monogenic orientation is +-xi/|xi|", orient, 1e-8);
  }

  {
    const MonogenicComponents mc = monogenic_components(Raster::Constant(64, 64, 2.5), opts.threads);
    rep.add_bool("constant image: A = c, phase 0, fully masked",
                 max_abs(mc.amplitude.array() - 2.5) < 1e-12 && max_abs(mc.phase) < 1e-12 &&
                     mc.valid.count() == 0);
  }

  rep.seconds = seconds_since(t0);
  rep.add("runtime under 60 s", rep.seconds, 60.0, fmt(rep.seconds) + " s");
  return rep;
}

// ---------------------------------------------------------------- Monte-Carlo

SuiteReport montecarlo_checks(const ValidationOptions& opts) {
  const auto t0 = Clock::now();
  SuiteReport rep{"montecarlo", {}, 0};
  SynthOptions so;
  so.threads = opts.threads;
  const int seeds = std::max(1, opts.seeds);
  const std::string per = " over " + std::to_string(seeds) + " seeds";

  // Elementary fields, Fig. 1 parameters.
  const std::vector<int> scales{0, 1, 2};
  constexpr int kPrimary = 1;
  const Grid grid{512, 0.0, 1.0};
  for (const double alpha0 : {0.0, kPi / 3}) {
    const FieldModel model = FieldModel::afbf(Hurst(0.5), alpha0, 0.3);
    double angle_err = 0, coh_err = 0, scale_dev = 0, profile_dev = 0, h_err = 0;
    double ratio = 0;
    for (int s = 0; s < seeds; ++s) {
      const auto field = synthesize_ssi(model, grid, opts.base_seed + s, 0, so);
      const auto simon = wavelet_pyramid(field.values, scales, RadialProfile::simoncelli(), opts.threads);
      const auto meyer = wavelet_pyramid(field.values, scales, RadialProfile::meyer(), opts.threads);
      std::vector<double> angles;
      for (int i : scales) {
        const auto os = orientation_of(empirical_structure_tensor(simon, i));
        const auto om = orientation_of(empirical_structure_tensor(meyer, i));
        angles.push_back(os.angle);
        profile_dev = std::max(profile_dev, axial_distance(os.angle, om.angle));
        if (i == kPrimary) {
          angle_err = std::max(angle_err, axial_distance(os.angle, alpha0));
          coh_err = std::max(coh_err, std::abs(os.coherency - 0.94));
        }
      }
      for (std::size_t k = 0; k + 1 < angles.size(); ++k)
        scale_dev = std::max(scale_dev, axial_distance(angles[k], angles[k + 1]));
      h_err = std::max(h_err, std::abs(estimate_hurst(simon, scales) - 0.5));
      ratio += empirical_structure_tensor(simon, 1).trace() /
               empirical_structure_tensor(simon, 0).trace();
    }
    ratio /= seeds;
    const std::string tag = "afbf a0=" + fmt(alpha0 * kDeg, 3) + "deg: ";
    rep.add(tag + "global angle error (deg)", angle_err * kDeg, 3.0, "max" + per);
    rep.add(tag + "|coherency - 0.94|", coh_err, 0.06, "max" + per);
    rep.add(tag + "angle change between scales (deg)", scale_dev * kDeg, 2.0, "max" + per);
    rep.add(tag + "angle change between profiles (deg)", profile_dev * kDeg, 2.0, "max" + per);
    rep.add(tag + "|H estimate - 0.5|", h_err, 0.1, "max" + per);
    rep.add(tag + "trace ratio vs 2^(2H), relative", std::abs(ratio / 2.0 - 1), 0.15,
            "mean ratio " + fmt(ratio));
  }

  {
    double h7 = 0, hf = 0, iso = 0;
    const FieldModel rough = FieldModel::afbf(Hurst(0.7), 0.0, 0.3);
    const FieldModel fbf = FieldModel::fbf(Hurst(0.5));
    for (int s = 0; s < seeds; ++s) {
      const auto a = synthesize_ssi(rough, grid, opts.base_seed + 100 + s, 0, so);
      h7 = std::max(h7, std::abs(estimate_hurst(
                                     wavelet_pyramid(a.values, scales, RadialProfile::simoncelli(), opts.threads),
                                     scales) - 0.7));
      const auto f = synthesize_ssi(fbf, grid, opts.base_seed + 200 + s, 0, so);
      const auto pyr = wavelet_pyramid(f.values, scales, RadialProfile::simoncelli(), opts.threads);
      hf = std::max(hf, std::abs(estimate_hurst(pyr, scales) - 0.5));
      const StructureTensord J = empirical_structure_tensor(pyr, kPrimary);
      iso = std::max(iso, std::abs(J.j12) / J.trace());
    }
    rep.add("afbf H=0.7: |H estimate - 0.7|", h7, 0.1, "max" + per);
    rep.add("fbf H=0.5: |H estimate - 0.5|", hf, 0.1, "max" + per);
    rep.add("fbf: |off-diagonal| / trace", iso, 0.05, "max" + per);
  }

  // Conformal warp, Fig. 2 parameters; orientation prescribed as α(x) = 2x₁ − x₂.
  {
    const Deformation phi = affine_conformal_deformation(2, -1, 0);
    const model::AFBF base{0.5, 0.0, 0.3};
    const int scale = 1;
    const double window = 8;
    double worst = 0;
    for (int s = 0; s < seeds; ++s) {
      const auto field = synthesize_wafbf(phi, base, grid, opts.base_seed + 300 + s,
                                          kDefaultWarpMargin, Interpolation::Bilinear, 0, so);
      const int sc[] = {scale};
      // Warped rasters are not periodic.
      const Raster inner = periodic_component(field.values, opts.threads);
      const auto pyr = wavelet_pyramid(inner, sc, RadialProfile::simoncelli(), opts.threads);
      const OrientationField of = windowed_orientation_field(pyr, scale, window);
      const auto [lo, hi] = central_range(grid.n, 0.5);
      double err = 0;
      long count = 0;
      for (int r = lo; r < hi; ++r)
        for (int c = lo; c < hi; ++c) {
          if (!of.valid(r, c)) continue;
          const Vector2d x = grid.node(r, c);
          err += axial_distance(of.angle(r, c), 2 * x.x() - x.y());
          ++count;
        }
      worst = std::max(worst, count ? err / count : kPi);
    }
    rep.add("conformal warp (2,-1): per-pixel mean abs angle error on central crop (deg)",
            worst * kDeg, 10.0, "worst seed" + per);
  }

  // Direct sums: constant angle field against the elementary field, and Fig. 1(b).
  {
    const Grid small{256, 0.0, 1.0};
    const int scale = 2;
    const int sc[] = {scale};
    const FieldModel flat =
        FieldModel::gafbf(ScalarField::constant(0.5), ScalarField::constant(kPi / 3), 0.3);
    ScalarExpr e;
    e.c = -kPi / 2;
    e.a1 = 1;
    const FieldModel sweep =
        FieldModel::gafbf(ScalarField::constant(0.5), ScalarField::expression(e), 0.3);
    double flat_err = 0, worst_r = 1;
    for (int s = 0; s < seeds; ++s) {
      const auto f = synthesize_gafbf(flat, small, opts.base_seed + 400 + s, kDefaultDirectFreqN, so);
      const Raster fp = periodic_component(f.values, opts.threads);
      const auto pf = wavelet_pyramid(fp, sc, RadialProfile::simoncelli(), opts.threads);
      const double direct = orientation_of(empirical_structure_tensor(pf, scale)).angle;
      const auto a = synthesize_ssi(FieldModel::afbf(Hurst(0.5), kPi / 3, 0.3), small,
                                    opts.base_seed + 400 + s, 0, so);
      const auto pa = wavelet_pyramid(a.values, sc, RadialProfile::simoncelli(), opts.threads);
      const double spectral = orientation_of(empirical_structure_tensor(pa, scale)).angle;
      flat_err = std::max({flat_err, axial_distance(direct, kPi / 3), axial_distance(direct, spectral)});

      const auto g = synthesize_gafbf(sweep, small, opts.base_seed + 500 + s, kDefaultDirectFreqN, so);
      const Raster gp = periodic_component(g.values, opts.threads);
      const auto pg = wavelet_pyramid(gp, sc, RadialProfile::simoncelli(), opts.threads);
      const OrientationField of = windowed_orientation_field(pg, scale, 16);
      const auto [lo, hi] = central_range(small.n, 0.75);
      double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
      long k = 0;
      for (int r = lo; r < hi; ++r)
        for (int c = lo; c < hi; ++c) {
          if (!of.valid(r, c)) continue;
          const double ref = e(small.node(r, c));
          const double est = ref + wrap_axial(of.angle(r, c) - ref);
          sx += est, sy += ref, sxx += est * est, syy += ref * ref, sxy += est * ref, ++k;
        }
      const double cov = sxy / k - (sx / k) * (sy / k);
      const double vx = sxx / k - (sx / k) * (sx / k);
      const double vy = syy / k - (sy / k) * (sy / k);
      worst_r = std::min(worst_r, cov / std::sqrt(vx * vy));
    }
    rep.add("gafbf constant angle vs afbf estimate and vs pi/3 (deg)", flat_err * kDeg, 3.0, "max" + per);
    rep.add("gafbf alpha = -pi/2 + x1: 1 - Pearson r on interior", 1 - worst_r, 0.2,
            "worst r " + fmt(worst_r) + per);
  }

  rep.seconds = seconds_since(t0);
  rep.add("runtime under 10 min", rep.seconds, 600.0, fmt(rep.seconds) + " s");
  return rep;
}

SuiteReport determinism_checks(const ValidationOptions& opts) {
  const auto t0 = Clock::now();
  SuiteReport rep{"montecarlo", {}, 0};
  const std::uint64_t seed = opts.base_seed + 77;
  const int counts[] = {1, 2, 3, 4};

  auto compare = [&](const std::string& name, auto&& make) {
    SynthOptions so;
    so.threads = 1;
    const Raster ref = make(so);
    bool same = bit_identical(ref, make(so));
    for (int t : counts) {
      so.threads = t;
      same = same && bit_identical(ref, make(so));
    }
    rep.add_bool(name + ": bit-identical across reruns and 1-4 threads", same);
  };

  const Grid grid{256, 0.0, 1.0};
  compare("spectral afbf", [&](const SynthOptions& so) {
    return synthesize_ssi(FieldModel::afbf(Hurst(0.5), 0.4, 0.3), grid, seed, 512, so).values;
  });
  compare("spectral linear deformation", [&](const SynthOptions& so) {
    Matrix2d L;
    L << 2, 0.3, -0.1, 0.7;
    return synthesize_ssi(FieldModel::linear_deformed(FieldModel::sum_afbf(Hurst(0.3), 0, 1.2, 0.2), L),
                          grid, seed, 0, so)
        .values;
  });
  ScalarExpr e;
  e.c = -kPi / 2;
  e.a1 = 1;
  e.q2 = 0.3;
  compare("direct gafbf", [&](const SynthOptions& so) {
    return synthesize_gafbf(FieldModel::gafbf(ScalarField::constant(0.6), ScalarField::expression(e), 0.3),
                            Grid{64, 0.0, 1.0}, seed, 32, so)
        .values;
  });
  compare("direct mbf", [&](const SynthOptions& so) {
    ScalarExpr h;
    h.c = 0.3;
    h.a1 = 0.4;
    return synthesize_gafbf(FieldModel::mbf(ScalarField::expression(h)), Grid{64, 0.0, 1.0}, seed,
                            32, so)
        .values;
  });
  compare("warped afbf", [&](const SynthOptions& so) {
    return synthesize_wafbf(affine_conformal_deformation(2, -1, 0), {0.5, 0.0, 0.3}, grid, seed,
                            kDefaultWarpMargin, Interpolation::Bicubic, 512, so)
        .values;
  });

  rep.seconds = seconds_since(t0);
  return rep;
}

// ---------------------------------------------------------------- suites

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"closedform", "frame", "riesz", "montecarlo"};
  return names;
}

SuiteReport run_suite(const std::string& name, const ValidationOptions& opts) {
  SuiteReport rep{name, {}, 0};
  if (name == "closedform") {
    rep.append(closed_form_checks(opts));
    rep.append(deformation_checks(opts));
    rep.append(conformal_checks(opts));
  } else if (name == "frame") {
    rep.append(frame_checks(opts));
  } else if (name == "riesz") {
    rep.append(riesz_checks(opts));
  } else if (name == "montecarlo") {
    rep.append(montecarlo_checks(opts));
    rep.append(determinism_checks(opts));
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown suite '" + name + "'");
  }
  return rep;
}

}  // namespace orifield
