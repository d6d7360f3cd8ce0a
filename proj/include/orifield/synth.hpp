#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "orifield/common.hpp"
#include "orifield/fields.hpp"

namespace orifield {

/// n×n nodes x = x0 + k·h, h = (x1 − x0)/n, on the square [x0, x1)².
struct Grid {
  int n = 512;
  double x0 = 0.0;
  double x1 = 1.0;

  double spacing() const { return (x1 - x0) / n; }
  double length() const { return x1 - x0; }
  /// Node at (row, col): x₁ follows the column, x₂ the row.
  Vector2d node(int row, int col) const { return {x0 + col * spacing(), x0 + row * spacing()}; }
  void validate() const;
};

enum class Interpolation { Bilinear, Bicubic };

const char* to_string(Interpolation interp);
Interpolation interpolation_from_string(const std::string& name);

/// Everything needed to regenerate a realization besides the model and seed.
struct SynthesisParams {
  std::string method;        // "ssi", "direct" or "warp"
  int freq_n = 0;            // frequency lattice size per axis
  double imag_residue = 0;   // max |Im| of the inverse DFT before discarding (ssi)
  // warp only
  double margin = 0.0;
  Interpolation interp = Interpolation::Bilinear;
  std::optional<Grid> base_grid;
};

struct FieldRealization {
  Raster values;
  Grid grid;
  FieldModel model;
  std::uint64_t seed = 0;
  SynthesisParams params;
};

struct SynthOptions {
  int threads = 0;                   // 0: ORIFIELD_THREADS or 1
  double max_direct_ops = 1e10;      // cap on n²·freqN² for direct sums
};

inline constexpr int kDefaultDirectFreqN = 64;
inline constexpr double kDefaultWarpMargin = 0.1;
inline constexpr int kMaxAutoBaseN = 2048;

/// Spectral synthesis of a self-similar field on a freqN² lattice
/// ξ ∈ (2π/L)·{−freqN/2, …, freqN/2−1}², one shared Hermitian noise draw,
/// evaluated with one inverse DFT (subsampled by freqN/n) and anchored so X(0) = 0.
/// freq_n = 0 selects freq_n = n.
FieldRealization synthesize_ssi(const FieldModel& model, const Grid& grid, std::uint64_t seed,
                                int freq_n = 0, const SynthOptions& opts = {});

/// Direct per-pixel sum for MBF and GAFBF on the same lattice and noise:
/// X(x) = Σ_ξ (e^{j⟨x,ξ⟩} − 1)·C(x,ξ)·‖ξ‖^{−h(x)−1}·W(ξ)·√Δξ.
/// For the cone family C² is averaged over each lattice cell, so X stays
/// continuous where α(x) moves a cell across the cone edge.
FieldRealization synthesize_gafbf(const FieldModel& model, const Grid& grid, std::uint64_t seed,
                                  int freq_n = kDefaultDirectFreqN, const SynthOptions& opts = {});

/// Z(x) = X(Φ(x)): X is synthesized on a square grid of base_n nodes covering
/// Φ(grid) enlarged by `margin`·extent per side, then interpolated.
/// base_n = 0 picks the smallest power of two ≥ n whose spacing is at most
/// half the smallest warped pixel spacing, capped at kMaxAutoBaseN.
FieldRealization synthesize_wafbf(const Deformation& phi, const model::AFBF& base,
                                  const Grid& grid, std::uint64_t seed,
                                  double margin = kDefaultWarpMargin,
                                  Interpolation interp = Interpolation::Bilinear, int base_n = 0,
                                  const SynthOptions& opts = {});

/// Dispatches on the model family. `freq_n` and `base_n` of 0 select defaults.
FieldRealization synthesize(const FieldModel& model, const Grid& grid, std::uint64_t seed,
                            int freq_n = 0, double margin = kDefaultWarpMargin,
                            Interpolation interp = Interpolation::Bilinear, int base_n = 0,
                            const SynthOptions& opts = {});

}  // namespace orifield
