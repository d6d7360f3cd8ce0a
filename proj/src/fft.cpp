#include "orifield/fft.hpp"

#include <cstdlib>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "orifield/parallel.hpp"

namespace orifield {

namespace {

enum class Direction { Forward, Inverse };

// Row transforms then column transforms; each worker owns its plan cache.
ComplexRaster transform(ComplexRaster data, Direction dir, int threads) {
  const Eigen::Index rows = data.rows();
  const Eigen::Index cols = data.cols();

  auto pass = [&](Eigen::Index lines, Eigen::Index length, bool along_rows) {
    parallel_for(std::size_t(lines), threads, [&](std::size_t begin, std::size_t end) {
      Eigen::FFT<double> fft;
      fft.SetFlag(Eigen::FFT<double>::Unscaled);
      std::vector<std::complex<double>> src(length), dst(length);
      for (std::size_t line = begin; line < end; ++line) {
        for (Eigen::Index k = 0; k < length; ++k)
          src[k] = along_rows ? data(Eigen::Index(line), k) : data(k, Eigen::Index(line));
        if (dir == Direction::Forward)
          fft.fwd(dst, src);
        else
          fft.inv(dst, src);
        for (Eigen::Index k = 0; k < length; ++k)
          (along_rows ? data(Eigen::Index(line), k) : data(k, Eigen::Index(line))) = dst[k];
      }
    });
  };
  pass(rows, cols, true);
  pass(cols, rows, false);
  return data;
}

}  // namespace

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ORIFIELD_THREADS")) {
    const int value = std::atoi(env);
    if (value > 0) return value;
  }
  return 1;
}

ComplexRaster fft2(const ComplexRaster& in, int threads) {
  return transform(in, Direction::Forward, threads);
}

ComplexRaster fft2(const Raster& in, int threads) {
  return transform(in.cast<std::complex<double>>(), Direction::Forward, threads);
}

ComplexRaster ifft2_unnormalized(const ComplexRaster& in, int threads) {
  return transform(in, Direction::Inverse, threads);
}

ComplexRaster ifft2(const ComplexRaster& in, int threads) {
  ComplexRaster out = transform(in, Direction::Inverse, threads);
  out /= double(in.rows() * in.cols());
  return out;
}

}  // namespace orifield
