#include "orifield/monogenic.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

#include "orifield/fft.hpp"
#include "orifield/parallel.hpp"

namespace orifield {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMaskRatio = 1e-12;

double meyer_taper(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const double t2 = t * t;
  return t2 * t2 * (35 - 84 * t + 70 * t2 - 20 * t2 * t);
}

void check_image(const Raster& image) {
  if (image.rows() != image.cols() || image.rows() < 8 || image.rows() % 2 != 0)
    throw Error(ErrorCode::InvalidArgument, "analysis needs an even n×n image with n >= 8");
}

// Riesz direction at bin (m1, m2); a Nyquist component counts as 0.
Vector2d riesz_direction(int m1, int m2, int n) {
  const int half = n / 2;
  const double a = m1 == -half ? 0.0 : m1;
  const double b = m2 == -half ? 0.0 : m2;
  const double r = std::hypot(a, b);
  if (r == 0) return Vector2d::Zero();
  return {a / r, b / r};
}

double mean_square(const Raster& image) {
  double s = 0;
  for (Eigen::Index r = 0; r < image.rows(); ++r)
    for (Eigen::Index c = 0; c < image.cols(); ++c) s += image(r, c) * image(r, c);
  return s / double(image.size());
}

// Periodic separable Gaussian smoothing, σ = w, radius ⌈3w⌉.
Raster smooth(const Raster& in, double w) {
  const int radius = int(std::ceil(3 * w));
  std::vector<double> g(2 * radius + 1);
  double total = 0;
  for (int t = -radius; t <= radius; ++t) total += g[t + radius] = std::exp(-0.5 * t * t / (w * w));
  for (double& v : g) v /= total;

  const int rows = int(in.rows());
  const int cols = int(in.cols());
  auto wrap = [](int i, int n) { return ((i % n) + n) % n; };
  Raster tmp(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      double s = 0;
      for (int t = -radius; t <= radius; ++t) s += g[t + radius] * in(r, wrap(c + t, cols));
      tmp(r, c) = s;
    }
  Raster out(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      double s = 0;
      for (int t = -radius; t <= radius; ++t) s += g[t + radius] * tmp(wrap(r + t, rows), c);
      out(r, c) = s;
    }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- profiles

RadialProfile RadialProfile::from_name(const std::string& name) {
  if (name == "simoncelli") return simoncelli();
  if (name == "meyer") return meyer();
  throw Error(ErrorCode::InvalidArgument, "unknown profile '" + name + "'");
}

double RadialProfile::operator()(double lambda) const {
  if (!(lambda > kPi / 4) || lambda > kPi) return 0.0;
  const double u = std::log2(2 * lambda / kPi);  // (−1, 1]
  if (kind_ == ProfileKind::Simoncelli) return std::cos(0.5 * kPi * u);
  if (u >= 0) return std::cos(0.5 * kPi * meyer_taper(u));
  return std::sin(0.5 * kPi * meyer_taper(u + 1));
}

const char* RadialProfile::name() const {
  return kind_ == ProfileKind::Meyer ? "meyer" : "simoncelli";
}

int RadialProfile::vanishing_moments() const { return std::numeric_limits<int>::max(); }

// ---------------------------------------------------------------- boundary

Raster periodic_component(const Raster& image, int threads) {
  check_image(image);
  threads = resolve_threads(threads);
  const int n = int(image.rows());
  // Jumps across the two seams, placed on the boundary pixels.
  ComplexRaster v = ComplexRaster::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double row_jump = image(n - 1, k) - image(0, k);
    v(0, k) += row_jump;
    v(n - 1, k) -= row_jump;
    const double col_jump = image(k, n - 1) - image(k, 0);
    v(k, 0) += col_jump;
    v(k, n - 1) -= col_jump;
  }
  ComplexRaster S = fft2(v, threads);
  for (int k2 = 0; k2 < n; ++k2)
    for (int k1 = 0; k1 < n; ++k1) {
      const double denom = 2 * std::cos(2 * kPi * k1 / n) + 2 * std::cos(2 * kPi * k2 / n) - 4;
      S(k2, k1) = (k1 == 0 && k2 == 0) ? 0.0 : S(k2, k1) / denom;
    }
  return image - ifft2(S, threads).real();
}

// ---------------------------------------------------------------- Riesz

RieszPair riesz_transform(const Raster& image, int threads) {
  check_image(image);
  threads = resolve_threads(threads);
  const int n = int(image.rows());
  ComplexRaster F = fft2(image, threads);
  // R₁f + jR₂f in one inverse transform: both parts are real on their own.
  for (int k2 = 0; k2 < n; ++k2)
    for (int k1 = 0; k1 < n; ++k1) {
      const Vector2d u = riesz_direction(signed_index(k1, n), signed_index(k2, n), n);
      F(k2, k1) *= std::complex<double>(-u.y(), u.x());
    }
  const ComplexRaster out = ifft2(F, threads);
  return {out.real(), out.imag()};
}

MonogenicComponents monogenic_components(const Raster& image, int threads) {
  const RieszPair R = riesz_transform(image, threads);
  const int n = int(image.rows());
  const double eps = kMaskRatio * mean_square(image);
  MonogenicComponents m{Raster(n, n), Raster(n, n), Raster::Zero(n, n), Raster::Zero(n, n),
                        Mask::Constant(n, n, false)};
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const double f = image(r, c);
      const double a = R.r1(r, c);
      const double b = R.r2(r, c);
      const double norm2 = a * a + b * b;
      const double norm = std::sqrt(norm2);
      m.amplitude(r, c) = std::sqrt(f * f + norm2);
      m.phase(r, c) = std::atan2(norm, f);
      if (norm2 > eps && norm > 0) {
        m.n1(r, c) = a / norm;
        m.n2(r, c) = b / norm;
        m.valid(r, c) = true;
      }
    }
  return m;
}

// ---------------------------------------------------------------- pyramid

const PyramidScale* WaveletPyramid::find(int scale) const {
  for (const auto& s : scales)
    if (s.scale == scale) return &s;
  return nullptr;
}

int max_scale(int n) { return int(std::floor(std::log2(double(n)))) - 2; }

WaveletPyramid wavelet_pyramid(const Raster& image, std::span<const int> scales,
                               const RadialProfile& profile, int threads) {
  check_image(image);
  if (scales.empty()) throw Error(ErrorCode::InvalidArgument, "no scales requested");
  const int n = int(image.rows());
  const int top = max_scale(n);
  std::set<int> seen;
  for (int i : scales) {
    if (i < 0 || i > top) {
      std::ostringstream os;
      os << "scale " << i << " has no lattice frequency in its band for n = " << n
         << " (valid 0.." << top << ")";
      throw Error(ErrorCode::ScaleOutOfBand, os.str());
    }
    if (!seen.insert(i).second) throw Error(ErrorCode::InvalidArgument, "duplicate scale");
  }
  threads = resolve_threads(threads);

  const ComplexRaster F = fft2(image, threads);
  Raster radius(n, n);
  std::vector<Vector2d> direction(std::size_t(n) * n);
  for (int k2 = 0; k2 < n; ++k2)
    for (int k1 = 0; k1 < n; ++k1) {
      const int m1 = signed_index(k1, n);
      const int m2 = signed_index(k2, n);
      radius(k2, k1) = 2 * kPi / n * std::hypot(double(m1), double(m2));
      direction[std::size_t(k2) * n + k1] = riesz_direction(m1, m2, n);
    }

  WaveletPyramid pyr;
  pyr.profile = profile.kind();
  pyr.n = n;
  pyr.source_energy = mean_square(image);
  pyr.scales.resize(scales.size());

  parallel_for(scales.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t s = begin; s < end; ++s) {
      const int i = scales[s];
      const double dilation = std::ldexp(1.0, i);
      ComplexRaster iso(n, n);
      ComplexRaster rz(n, n);
      for (int k2 = 0; k2 < n; ++k2)
        for (int k1 = 0; k1 < n; ++k1) {
          const double phi = profile(dilation * radius(k2, k1));
          const std::complex<double> v = F(k2, k1) * phi;
          const Vector2d& u = direction[std::size_t(k2) * n + k1];
          iso(k2, k1) = v;
          rz(k2, k1) = v * std::complex<double>(-u.y(), u.x());
        }
      const ComplexRaster c = ifft2(iso, 1);
      const ComplexRaster r = ifft2(rz, 1);
      pyr.scales[s] = {i, c.real(), r.real(), r.imag()};
    }
  });

  double band = 0;
  for (int k2 = 0; k2 < n; ++k2)
    for (int k1 = 0; k1 < n; ++k1) {
      double gain = 0;
      for (int i : scales) {
        const double phi = profile(std::ldexp(1.0, i) * radius(k2, k1));
        gain += phi * phi;
      }
      band += std::norm(F(k2, k1)) * gain;
    }
  pyr.bandpassed_energy = band / (double(n) * n);
  return pyr;
}

StructureTensord empirical_structure_tensor(const WaveletPyramid& pyr, int scale) {
  const PyramidScale* s = pyr.find(scale);
  if (!s) throw Error(ErrorCode::EmptyScale, "scale " + std::to_string(scale) + " not in pyramid");
  StructureTensord J;
  for (Eigen::Index r = 0; r < s->r1.rows(); ++r)
    for (Eigen::Index c = 0; c < s->r1.cols(); ++c) {
      const double a = s->r1(r, c);
      const double b = s->r2(r, c);
      J.j11 += a * a;
      J.j12 += a * b;
      J.j22 += b * b;
    }
  return (1.0 / double(s->r1.size())) * J;
}

OrientationField windowed_orientation_field(const WaveletPyramid& pyr, int scale, double w) {
  const PyramidScale* s = pyr.find(scale);
  if (!s) throw Error(ErrorCode::EmptyScale, "scale " + std::to_string(scale) + " not in pyramid");
  if (!(w >= 2)) throw Error(ErrorCode::InvalidArgument, "window radius must be >= 2 pixels");

  const Raster j11 = smooth(s->r1.cwiseProduct(s->r1), w);
  const Raster j12 = smooth(s->r1.cwiseProduct(s->r2), w);
  const Raster j22 = smooth(s->r2.cwiseProduct(s->r2), w);

  const int rows = int(j11.rows());
  const int cols = int(j11.cols());
  const double eps = kMaskRatio * pyr.source_energy;
  OrientationField out{Raster::Zero(rows, cols), Raster::Zero(rows, cols),
                       Mask::Constant(rows, cols, false)};
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const double trace = j11(r, c) + j22(r, c);
      if (!(trace > eps)) continue;
      const double d = j11(r, c) - j22(r, c);
      const double off = 2 * j12(r, c);
      out.angle(r, c) = wrap_axial(0.5 * std::atan2(off, d));
      out.coherency(r, c) = std::min(1.0, std::hypot(d, off) / trace);
      out.valid(r, c) = true;
    }
  return out;
}

// ---------------------------------------------------------------- Hurst

double estimate_hurst_from_traces(std::span<const int> scales, std::span<const double> traces) {
  if (scales.size() != traces.size())
    throw Error(ErrorCode::InvalidArgument, "scales and traces differ in length");
  if (std::set<int>(scales.begin(), scales.end()).size() < 2)
    throw Error(ErrorCode::InsufficientScales, "Hurst regression needs at least two scales");
  // Regress in the fine-positive convention p = −i, where the coefficient
  // variance of an L²-normalized wavelet is ∝ 2^{−2p(H+1)} = trace_i·2^{2i}.
  const std::size_t m = scales.size();
  double sx = 0, sy = 0;
  std::vector<double> x(m), y(m);
  for (std::size_t k = 0; k < m; ++k) {
    if (!(traces[k] > 0))
      throw Error(ErrorCode::InvalidArgument, "Hurst regression needs positive traces");
    x[k] = -scales[k];
    y[k] = std::log2(traces[k]) + 2.0 * scales[k];
    sx += x[k];
    sy += y[k];
  }
  const double mx = sx / m;
  const double my = sy / m;
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < m; ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
  }
  const double slope = sxy / sxx;
  return -slope / 2 - 1;
}

double estimate_hurst(const WaveletPyramid& pyr, std::span<const int> scales) {
  if (scales.size() < 2)
    throw Error(ErrorCode::InsufficientScales, "Hurst regression needs at least two scales");
  std::vector<double> traces;
  for (int i : scales) traces.push_back(empirical_structure_tensor(pyr, i).trace());
  return estimate_hurst_from_traces(scales, traces);
}

AxialStats axial_statistics(const OrientationField& field, double crop) {
  const auto [r0, r1] = central_range(field.rows(), crop);
  const auto [c0, c1] = central_range(field.cols(), crop);
  AxialStats st;
  double sc = 0, ss = 0, coh = 0;
  for (int r = r0; r < r1; ++r)
    for (int c = c0; c < c1; ++c) {
      if (!field.valid(r, c)) continue;
      sc += std::cos(2 * field.angle(r, c));
      ss += std::sin(2 * field.angle(r, c));
      coh += field.coherency(r, c);
      ++st.count;
    }
  if (st.count == 0) return st;
  const double R = std::hypot(sc, ss) / st.count;
  st.mean = wrap_axial(0.5 * std::atan2(ss, sc));
  st.std = 0.5 * std::sqrt(std::max(0.0, -2 * std::log(std::max(R, 1e-300))));
  st.coherency = coh / st.count;
  return st;
}

}  // namespace orifield
