#pragma once

#include "orifield/common.hpp"

namespace orifield {

/// Unnormalized forward 2-D DFT: F[k] = Σ_x f[x] e^{−2πj⟨k,x⟩/n}.
ComplexRaster fft2(const ComplexRaster& in, int threads = 1);
ComplexRaster fft2(const Raster& in, int threads = 1);

/// Inverse 2-D DFT including the 1/(rows·cols) factor.
ComplexRaster ifft2(const ComplexRaster& in, int threads = 1);

/// Inverse 2-D DFT without normalization: Σ_k F[k] e^{+2πj⟨k,x⟩/n}.
ComplexRaster ifft2_unnormalized(const ComplexRaster& in, int threads = 1);

/// Signed frequency index of DFT bin k on a length-n axis: {−n/2, …, n/2−1}.
inline int signed_index(int k, int n) { return k < n / 2 ? k : k - n; }

}  // namespace orifield
