#pragma once

#include <span>
#include <string>
#include <vector>

#include "orifield/common.hpp"
#include "orifield/tensor.hpp"

namespace orifield {

enum class ProfileKind { Simoncelli, Meyer };

/// Isotropic radial wavelet profile φ supported on (π/4, π] with
/// Σ_j |φ(2^j λ)|² = 1 on (0, π].
class RadialProfile {
 public:
  static RadialProfile simoncelli() { return RadialProfile(ProfileKind::Simoncelli); }
  static RadialProfile meyer() { return RadialProfile(ProfileKind::Meyer); }
  static RadialProfile from_name(const std::string& name);

  double operator()(double lambda) const;
  ProfileKind kind() const { return kind_; }
  const char* name() const;
  /// φ vanishes on a neighbourhood of 0, so every derivative vanishes there.
  int vanishing_moments() const;

 private:
  explicit RadialProfile(ProfileKind kind) : kind_(kind) {}
  ProfileKind kind_;
};

struct RieszPair {
  Raster r1;
  Raster r2;
};

/// Multipliers jξ_k/‖ξ‖ on the DFT lattice. The Nyquist component of ξ is
/// treated as 0 so the multiplier stays odd and the outputs stay real.
RieszPair riesz_transform(const Raster& image, int threads = 0);

struct MonogenicComponents {
  Raster amplitude;
  Raster phase;   // atan2(‖Rf‖, f) ∈ [0, π]
  Raster n1;      // Rf/‖Rf‖, 0 where masked
  Raster n2;
  Mask valid;     // false where ‖Rf‖² ≤ 1e-12 × mean f²
};

MonogenicComponents monogenic_components(const Raster& image, int threads = 0);

/// Scale i uses φ(2^i‖ξ‖): i = 0 touches λ = π, larger i is coarser.
struct PyramidScale {
  int scale;
  Raster iso;
  Raster r1;
  Raster r2;
};

struct WaveletPyramid {
  std::vector<PyramidScale> scales;
  ProfileKind profile = ProfileKind::Simoncelli;
  int n = 0;
  double source_energy = 0;      // mean f² per pixel
  double bandpassed_energy = 0;  // (1/n²) Σ_ξ |F(ξ)|² Σ_i φ(2^i‖ξ‖)², from the spectrum

  const PyramidScale* find(int scale) const;
};

/// Periodic part of the periodic-plus-smooth decomposition (Moisan 2011).
/// A non-periodic raster seen through the DFT has a seam between opposite
/// edges; the seam puts spurious energy on the axes. Analyzing this
/// component instead removes it while leaving the texture in the interior.
Raster periodic_component(const Raster& image, int threads = 0);

/// Largest scale with a nonzero lattice frequency in its band: log₂n − 2.
int max_scale(int n);

/// Undecimated isotropic and Riesz coefficient maps at the requested scales.
WaveletPyramid wavelet_pyramid(const Raster& image, std::span<const int> scales,
                               const RadialProfile& profile, int threads = 0);

/// Σ̂ = mean over pixels of (c⁽¹⁾, c⁽²⁾)(c⁽¹⁾, c⁽²⁾)ᵀ.
StructureTensord empirical_structure_tensor(const WaveletPyramid& pyr, int scale);

struct OrientationField {
  Raster angle;      // axial, (−π/2, π/2]
  Raster coherency;  // [0, 1]
  Mask valid;

  int rows() const { return int(angle.rows()); }
  int cols() const { return int(angle.cols()); }
  long valid_count() const { return long(valid.count()); }
};

/// Gaussian-windowed (σ = w, truncated at 3w, periodic) average of the rank-1
/// Riesz tensors at one scale, then per-pixel eigen-analysis.
OrientationField windowed_orientation_field(const WaveletPyramid& pyr, int scale, double w);

/// Log-log regression of trace Σ̂ across scales (at least two).
double estimate_hurst(const WaveletPyramid& pyr, std::span<const int> scales);

/// Same regression on given traces. trace_i ∝ 2^{2iH} in this library's
/// scale convention.
double estimate_hurst_from_traces(std::span<const int> scales, std::span<const double> traces);

/// Axial statistics over unmasked pixels inside the central `crop` fraction.
struct AxialStats {
  double mean = 0;     // ½ arg Σ e^{2jθ}
  double std = 0;      // ½ √(−2 ln R)
  double coherency = 0;
  long count = 0;
};

AxialStats axial_statistics(const OrientationField& field, double crop = 1.0);

/// |θ − φ| modulo π, in [0, π/2].
inline double axial_distance(double a, double b) { return std::abs(wrap_axial(a - b)); }

/// Central window [lo, hi) of an n-pixel axis keeping `crop` of it.
inline std::pair<int, int> central_range(int n, double crop) {
  const int keep = std::max(1, int(std::lround(n * crop)));
  const int lo = (n - keep) / 2;
  return {lo, lo + keep};
}

}  // namespace orifield
