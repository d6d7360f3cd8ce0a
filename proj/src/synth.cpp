#include "orifield/synth.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <limits>
#include <sstream>
#include <vector>

#include "orifield/fft.hpp"
#include "orifield/parallel.hpp"
#include "orifield/rng.hpp"

namespace orifield {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

// One of each ±m pair carries the noise draw; the other gets its conjugate.
bool is_canonical(int m1, int m2) { return m2 > 0 || (m2 == 0 && m1 > 0); }

void check_hurst_on_grid(const ScalarField& h, const Grid& grid, const char* what) {
  for (int r = 0; r < grid.n; ++r)
    for (int c = 0; c < grid.n; ++c) {
      const double v = h(grid.node(r, c));
      if (!(v > 0.0 && v < 1.0)) {
        std::ostringstream os;
        os << what << " Hurst function leaves (0,1) on the grid: h = " << v;
        throw Error(ErrorCode::InvalidArgument, os.str());
      }
    }
}

void check_freq_n(int freq_n, const Grid& grid, bool allow_coarser) {
  if (!is_power_of_two(freq_n) || freq_n < 2)
    throw Error(ErrorCode::InvalidFrequencyGrid, "frequency grid size must be a power of two");
  if (!allow_coarser && freq_n < grid.n)
    throw Error(ErrorCode::InvalidFrequencyGrid, "frequency grid size must be at least n");
}

// Canonical lattice bin shared by the direct-sum engine.
struct Bin {
  int m1;
  int m2;
  double log_radius;
  double theta;  // arg ξ
  double axial;  // wrap_axial(arg ξ)
  double half_width;  // angle subtended by half the cell, seen from the origin
  std::complex<double> noise;
};

// Angular half-width of the cell at |m| = 1, the widest one.
constexpr double kMaxCellHalfWidth = 0.5;

// Fraction of a cell of angular half-width w, centred at axial offset d from
// α, that falls inside the even cone of half-width δ. Integrating the cone
// over the cell keeps the direct sum continuous in x as α(x) sweeps bins
// in and out of the window.
double cone_cell_fraction(double d, double w, double delta) {
  d = std::abs(wrap_axial(d));
  auto overlap = [&](double e) {
    return std::max(0.0, std::min(e + w, delta) - std::max(e - w, -delta));
  };
  return std::min(1.0, (overlap(d) + overlap(kPi - d)) / (2 * w));
}

std::vector<Bin> canonical_bins(int freq_n, double dxi, std::uint64_t seed) {
  std::vector<Bin> bins;
  const int half = freq_n / 2;
  for (int m2 = 0; m2 < half; ++m2)
    for (int m1 = -half + 1; m1 < half; ++m1) {
      if (!is_canonical(m1, m2)) continue;
      const double xi1 = dxi * m1;
      const double xi2 = dxi * m2;
      const double theta = std::atan2(xi2, xi1);
      const double radius = std::hypot(xi1, xi2);
      bins.push_back({m1, m2, std::log(radius), theta, wrap_axial(theta), 0.5 * dxi / radius,
                      spectral_noise(seed, m1, m2)});
    }
  return bins;
}

double keys_weight(double t) {
  // Cubic convolution kernel, a = −1/2.
  t = std::abs(t);
  if (t < 1.0) return (1.5 * t - 2.5) * t * t + 1.0;
  if (t < 2.0) return ((-0.5 * t + 2.5) * t - 4.0) * t + 2.0;
  return 0.0;
}

}  // namespace

void Grid::validate() const {
  if (n < 8 || !is_power_of_two(n))
    throw Error(ErrorCode::InvalidArgument, "grid size must be a power of two >= 8");
  if (!(x1 > x0) || !std::isfinite(x0) || !std::isfinite(x1))
    throw Error(ErrorCode::InvalidArgument, "grid domain must satisfy x1 > x0");
}

const char* to_string(Interpolation interp) {
  return interp == Interpolation::Bicubic ? "bicubic" : "bilinear";
}

Interpolation interpolation_from_string(const std::string& name) {
  if (name == "bilinear") return Interpolation::Bilinear;
  if (name == "bicubic") return Interpolation::Bicubic;
  throw Error(ErrorCode::InvalidArgument, "unknown interpolation '" + name + "'");
}

// ---------------------------------------------------------------- spectral (FFT)

FieldRealization synthesize_ssi(const FieldModel& model, const Grid& grid, std::uint64_t seed,
                                int freq_n, const SynthOptions& opts) {
  grid.validate();
  if (!model.is_self_similar())
    throw Error(ErrorCode::InvalidArgument,
                std::string("spectral synthesis needs a self-similar model, got ") + model.family());
  if (freq_n == 0) freq_n = grid.n;
  check_freq_n(freq_n, grid, false);

  const int threads = resolve_threads(opts.threads);
  const AnisotropySpec s = model.anisotropy();
  const Hurst hurst(model.hurst());
  const int N = freq_n;
  const int half = N / 2;
  const double dxi = 2 * kPi / grid.length();
  const double cell = dxi * dxi;

  ComplexRaster amplitude = ComplexRaster::Zero(N, N);
  std::vector<double> row_origin(N, 0.0);  // Σ over canonical bins of the row: 2·Re(a·W)

  parallel_for(std::size_t(N), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k2 = begin; k2 < end; ++k2) {
      const int m2 = signed_index(int(k2), N);
      double origin = 0.0;
      for (int k1 = 0; k1 < N; ++k1) {
        const int m1 = signed_index(k1, N);
        if (m1 == -half || m2 == -half || !is_canonical(m1, m2)) continue;
        const Vector2d xi(dxi * m1, dxi * m2);
        const double a = std::sqrt(eval_spectral_density(s, hurst, xi) * cell);
        const std::complex<double> coeff = a * spectral_noise(seed, m1, m2);
        origin += 2.0 * coeff.real();
        // Shift the lattice to start at (x0, x0).
        const std::complex<double> shifted =
            coeff * std::polar(1.0, (xi.x() + xi.y()) * grid.x0);
        amplitude(Eigen::Index(k2), k1) = shifted;
        amplitude((N - int(k2)) % N, (N - k1) % N) = std::conj(shifted);
      }
      row_origin[k2] = origin;
    }
  });

  const ComplexRaster y = ifft2_unnormalized(amplitude, threads);
  const int stride = N / grid.n;

  Raster values(grid.n, grid.n);
  double residue = 0.0;
  for (int r = 0; r < grid.n; ++r)
    for (int c = 0; c < grid.n; ++c) {
      const std::complex<double> v = y(r * stride, c * stride);
      values(r, c) = v.real();
      residue = std::max(residue, std::abs(v.imag()));
    }

  // X(x) = Y(x) − Y(0). When the origin lies in the domain its pixel is the reference.
  if (grid.x0 <= 0.0 && 0.0 < grid.x1) {
    const int p = std::min(grid.n - 1, int(std::floor(-grid.x0 / grid.spacing())));
    values.array() -= values(p, p);
  } else {
    double origin = 0.0;
    for (double v : row_origin) origin += v;
    values.array() -= origin;
  }

  SynthesisParams params;
  params.method = "ssi";
  params.freq_n = N;
  params.imag_residue = residue;
  return {std::move(values), grid, model, seed, params};
}

// ---------------------------------------------------------------- direct sums

FieldRealization synthesize_gafbf(const FieldModel& model, const Grid& grid, std::uint64_t seed,
                                  int freq_n, const SynthOptions& opts) {
  grid.validate();
  const auto* mbf = model.as<model::MBF>();
  const auto* gafbf = model.as<model::GAFBF>();
  if (!mbf && !gafbf)
    throw Error(ErrorCode::InvalidArgument,
                std::string("direct synthesis needs an MBF or GAFBF, got ") + model.family());
  if (freq_n == 0) freq_n = kDefaultDirectFreqN;
  check_freq_n(freq_n, grid, true);
  const double ops = double(grid.n) * grid.n * double(freq_n) * freq_n;
  if (ops > opts.max_direct_ops) {
    std::ostringstream os;
    os << "n^2 * freqN^2 = " << ops << " exceeds the configured cap " << opts.max_direct_ops;
    throw Error(ErrorCode::BudgetExceeded, os.str());
  }

  const ScalarField& hurst = mbf ? mbf->hurst : gafbf->hurst;
  check_hurst_on_grid(hurst, grid, model.family());

  const int threads = resolve_threads(opts.threads);
  const int N = freq_n;
  const int half = N / 2;
  const double dxi = 2 * kPi / grid.length();
  const double sqrt_cell = dxi;

  std::vector<Bin> bins = canonical_bins(N, dxi, seed);
  const bool cone_family = gafbf && !gafbf->amplitude;
  const bool narrow_cone = cone_family && gafbf->delta + kMaxCellHalfWidth < kPi / 2;
  if (narrow_cone)
    std::stable_sort(bins.begin(), bins.end(),
                     [](const Bin& a, const Bin& b) { return a.axial < b.axial; });
  std::vector<double> axial(bins.size());
  for (std::size_t b = 0; b < bins.size(); ++b) axial[b] = bins[b].axial;

  // e^{j x₁ ξ₁} and e^{j x₂ ξ₂} tables indexed by (pixel, m + N/2).
  ComplexRaster phase1(grid.n, N), phase2(grid.n, N);
  for (int p = 0; p < grid.n; ++p) {
    const Vector2d x = grid.node(p, p);
    for (int m = -half; m < half; ++m) {
      phase1(p, m + half) = std::polar(1.0, x.x() * dxi * m);
      phase2(p, m + half) = std::polar(1.0, x.y() * dxi * m);
    }
  }

  Raster values(grid.n, grid.n);
  parallel_for(std::size_t(grid.n), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r)
      for (int c = 0; c < grid.n; ++c) {
        const Vector2d x = grid.node(int(r), c);
        const double h = hurst(x);
        double sum = 0.0;
        auto accumulate = [&](const Bin& bin, double amplitude) {
          const std::complex<double> e =
              phase1(c, bin.m1 + half) * phase2(Eigen::Index(r), bin.m2 + half);
          const double magnitude = amplitude * std::exp(-(h + 1.0) * bin.log_radius);
          sum += 2.0 * magnitude * ((e - 1.0) * bin.noise).real();
        };
        if (cone_family) {
          // Even cone of half-width δ around α(x): C² = 1/(4δ) on each lobe.
          const double alpha = wrap_axial(gafbf->alpha(x));
          const double amplitude = 0.5 / std::sqrt(gafbf->delta);
          auto visit = [&](const Bin& bin) {
            const double t = cone_cell_fraction(bin.axial - alpha, bin.half_width, gafbf->delta);
            if (t > 0.0) accumulate(bin, amplitude * std::sqrt(t));
          };
          if (!narrow_cone) {
            for (const Bin& bin : bins) visit(bin);
            values(Eigen::Index(r), c) = sum * sqrt_cell;
            continue;
          }
          auto run = [&](double lo, double hi) {
            auto first = std::lower_bound(axial.begin(), axial.end(), lo);
            auto last = std::upper_bound(axial.begin(), axial.end(), hi);
            for (auto it = first; it < last; ++it) visit(bins[std::size_t(it - axial.begin())]);
          };
          const double lo = alpha - gafbf->delta - kMaxCellHalfWidth;
          const double hi = alpha + gafbf->delta + kMaxCellHalfWidth;
          // Bins are sorted by axial angle in (−π/2, π/2]; split the window at the wrap.
          if (lo <= -kPi / 2) {
            run(-kPi / 2, hi);
            run(lo + kPi, kPi / 2);
          } else if (hi > kPi / 2) {
            run(lo, kPi / 2);
            run(-kPi / 2, hi - kPi);
          } else {
            run(lo, hi);
          }
        } else if (gafbf) {
          for (const Bin& bin : bins) {
            const double amp = gafbf->amplitude(x, bin.theta);
            if (amp != 0.0) accumulate(bin, amp);
          }
        } else {
          const double amplitude = 1.0 / std::sqrt(2 * kPi);
          for (const Bin& bin : bins) accumulate(bin, amplitude);
        }
        values(Eigen::Index(r), c) = sum * sqrt_cell;
      }
  });

  SynthesisParams params;
  params.method = "direct";
  params.freq_n = N;
  return {std::move(values), grid, model, seed, params};
}

// ---------------------------------------------------------------- warped

namespace {

// Base grid fine enough that warped neighbours are at least two base cells
// apart in every direction, so interpolation does not smooth the texture.
int auto_base_n(const Deformation& phi, const Grid& grid, double span) {
  double shrink = std::numeric_limits<double>::infinity();
  const int step = std::max(1, grid.n / 32);
  for (int r = 0; r < grid.n; r += step)
    for (int c = 0; c < grid.n; c += step) {
      const Eigen::JacobiSVD<Matrix2d> svd(phi.jacobian(grid.node(r, c)));
      shrink = std::min(shrink, svd.singularValues()(1));
    }
  const double wanted = span / (0.5 * grid.spacing() * std::max(shrink, 1e-3));
  int n = grid.n;
  while (n < wanted && n < kMaxAutoBaseN) n *= 2;
  return n;
}

}  // namespace

FieldRealization synthesize_wafbf(const Deformation& phi, const model::AFBF& base,
                                  const Grid& grid, std::uint64_t seed, double margin,
                                  Interpolation interp, int base_n, const SynthOptions& opts) {
  grid.validate();
  if (!(margin >= 0.0) || !std::isfinite(margin))
    throw Error(ErrorCode::InvalidArgument, "margin must be finite and non-negative");
  const int threads = resolve_threads(opts.threads);

  // Warped sample positions.
  std::vector<Vector2d> points(std::size_t(grid.n) * grid.n);
  parallel_for(std::size_t(grid.n), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r)
      for (int c = 0; c < grid.n; ++c) points[r * grid.n + c] = phi(grid.node(int(r), c));
  });
  Vector2d lo = Vector2d::Constant(std::numeric_limits<double>::infinity());
  Vector2d hi = -lo;
  for (const Vector2d& p : points) {
    if (!p.allFinite()) throw Error(ErrorCode::DomainEscape, "deformation is not finite on the grid");
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  double extent = (hi - lo).maxCoeff();
  if (extent <= 0.0) extent = grid.spacing();
  const double start = lo.minCoeff() - margin * extent;
  const double stop = hi.maxCoeff() + margin * extent;
  if (base_n == 0) base_n = auto_base_n(phi, grid, stop - start);
  const double h = (stop - start) / (base_n - 1);
  const Grid base_grid{base_n, start, start + base_n * h};

  const FieldModel base_model = FieldModel::afbf(Hurst(base.hurst), base.alpha0, base.delta);
  const FieldRealization field = synthesize_ssi(base_model, base_grid, seed, base_n, opts);
  const Raster& X = field.values;
  const int last = base_n - 1;

  auto sample = [&](const Vector2d& p) -> double {
    const double u = (p.x() - start) / h;  // column
    const double v = (p.y() - start) / h;  // row
    constexpr double slack = 1e-9;
    if (!(u >= -slack && v >= -slack && u <= last + slack && v <= last + slack))
      throw Error(ErrorCode::DomainEscape, "warped point leaves the enlarged base grid");
    const int i = std::clamp(int(std::floor(v)), 0, last - 1);
    const int j = std::clamp(int(std::floor(u)), 0, last - 1);
    const double tv = v - i;
    const double tu = u - j;
    if (interp == Interpolation::Bilinear) {
      return (1 - tv) * ((1 - tu) * X(i, j) + tu * X(i, j + 1)) +
             tv * ((1 - tu) * X(i + 1, j) + tu * X(i + 1, j + 1));
    }
    double acc = 0.0;
    for (int di = -1; di <= 2; ++di) {
      const double wv = keys_weight(tv - di);
      if (wv == 0.0) continue;
      const int ii = std::clamp(i + di, 0, last);
      for (int dj = -1; dj <= 2; ++dj) {
        const double wu = keys_weight(tu - dj);
        if (wu == 0.0) continue;
        acc += wv * wu * X(ii, std::clamp(j + dj, 0, last));
      }
    }
    return acc;
  };

  Raster values(grid.n, grid.n);
  parallel_for(std::size_t(grid.n), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r)
      for (int c = 0; c < grid.n; ++c)
        values(Eigen::Index(r), c) = sample(points[r * grid.n + c]);
  });

  SynthesisParams params;
  params.method = "warp";
  params.freq_n = base_n;
  params.imag_residue = field.params.imag_residue;
  params.margin = margin;
  params.interp = interp;
  params.base_grid = base_grid;
  return {std::move(values), grid, FieldModel::wafbf(phi, Hurst(base.hurst), base.alpha0, base.delta),
          seed, params};
}

FieldRealization synthesize(const FieldModel& model, const Grid& grid, std::uint64_t seed,
                            int freq_n, double margin, Interpolation interp, int base_n,
                            const SynthOptions& opts) {
  if (model.is_self_similar()) return synthesize_ssi(model, grid, seed, freq_n, opts);
  if (const auto* w = model.as<model::WAFBF>())
    return synthesize_wafbf(w->phi, w->base, grid, seed, margin, interp, base_n, opts);
  return synthesize_gafbf(model, grid, seed, freq_n, opts);
}

}  // namespace orifield
