#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace orifield {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
/// Output is a pure function of (key, counter), so streams can be addressed
/// directly and generated in any order or on any thread.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit Philox4x32(std::uint64_t seed)
      : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)} {}

  Counter operator()(Counter ctr) const {
    Key key = key_;
    for (int round = 0; round < 10; ++round) {
      ctr = single_round(ctr, key);
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static Counter single_round(const Counter& c, const Key& k) {
    const std::uint64_t p0 = std::uint64_t(kMul0) * c[0];
    const std::uint64_t p1 = std::uint64_t(kMul1) * c[2];
    return {std::uint32_t(p1 >> 32) ^ c[1] ^ k[0], std::uint32_t(p1),
            std::uint32_t(p0 >> 32) ^ c[3] ^ k[1], std::uint32_t(p0)};
  }

  Key key_;
};

/// Standard complex Gaussian (E|W|² = 1) for spectral bin (m1, m2).
/// Stream rule: counter = (m1, m2, stream, 0) with signed indices reinterpreted
/// as 32-bit words; one bin, one stream.
inline std::complex<double> spectral_noise(std::uint64_t seed, std::int32_t m1, std::int32_t m2,
                                           std::uint32_t stream = 0) {
  const Philox4x32 gen(seed);
  const auto r = gen({std::uint32_t(m1), std::uint32_t(m2), stream, 0u});
  // Two 53-bit uniforms in (0, 1].
  const auto uniform = [](std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = ((std::uint64_t(hi) << 32) | lo) >> 11;
    return (double(bits) + 1.0) * 0x1.0p-53;
  };
  const double u1 = uniform(r[0], r[1]);
  const double u2 = uniform(r[2], r[3]);
  // Box–Muller; each component has variance 1/2.
  const double radius = std::sqrt(-std::log(u1));
  constexpr double two_pi = 6.283185307179586476925286766559;
  return {radius * std::cos(two_pi * u2), radius * std::sin(two_pi * u2)};
}

}  // namespace orifield
