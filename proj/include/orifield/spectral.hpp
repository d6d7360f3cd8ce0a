#pragma once

#include <functional>
#include <memory>
#include <string_view>
#include <variant>
#include <vector>

#include "orifield/common.hpp"

namespace orifield {

/// Hurst exponent, strictly inside (0, 1).
class Hurst {
 public:
  explicit Hurst(double value);
  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// Receives non-fatal modelling diagnostics (e.g. overlapping cone supports).
/// The default handler writes to stderr.
using DiagnosticHandler = std::function<void(std::string_view)>;
void set_diagnostic_handler(DiagnosticHandler handler);
void emit_diagnostic(std::string_view message);

class AnisotropySpec;

namespace spec {

struct Isotropic {
  double level;
};

/// Even cone: the paper's one-sided indicator (1/2δ)·1[|arg Θ − α₀| ≤ δ] is
/// symmetrized as ½(S(Θ) + S(−Θ)), so each lobe carries level/2 and the
/// total mass over the circle is 2δ·level.
struct Cone {
  double alpha0;  // in (−π/2, π/2]
  double delta;   // in (0, π]
  double level;
};

struct Sum {
  std::shared_ptr<const AnisotropySpec> left;
  std::shared_ptr<const AnisotropySpec> right;
  bool overlapping;
};

/// Anisotropy of X(L⁻¹x) for an H-self-similar X.
struct LinearlyTransformed {
  std::shared_ptr<const AnisotropySpec> base;
  double hurst;
  Matrix2d L;
  double abs_det;
};

/// User-supplied anisotropy; the callback must be even, non-negative and
/// reentrant. Breakpoints (radians) mark its jump discontinuities.
struct Callback {
  std::function<double(double)> evaluate;
  std::vector<double> breakpoints;
};

}  // namespace spec

/// Anisotropy function S on the unit circle, immutable after construction.
class AnisotropySpec {
 public:
  using Node = std::variant<spec::Isotropic, spec::Cone, spec::Sum, spec::LinearlyTransformed,
                            spec::Callback>;

  static AnisotropySpec isotropic(double level = 1.0 / (2.0 * std::numbers::pi));
  static AnisotropySpec cone(double alpha0, double delta);
  static AnisotropySpec cone(double alpha0, double delta, double level);
  static AnisotropySpec sum(AnisotropySpec left, AnisotropySpec right);
  static AnisotropySpec linearly_transformed(AnisotropySpec base, Hurst hurst, const Matrix2d& L);
  static AnisotropySpec callback(std::function<double(double)> evaluate,
                                 std::vector<double> breakpoints = {});

  const Node& node() const noexcept { return *node_; }

  template <typename T>
  const T* as() const noexcept {
    return std::get_if<T>(node_.get());
  }

 private:
  explicit AnisotropySpec(Node node) : node_(std::make_shared<const Node>(std::move(node))) {}
  std::shared_ptr<const Node> node_;
};

/// S(cos θ, sin θ).
double eval_anisotropy(const AnisotropySpec& s, double theta);

/// f(ξ) = ‖ξ‖^{−2H−2} S(ξ/‖ξ‖). Throws ZeroFrequency at ξ = 0.
double eval_spectral_density(const AnisotropySpec& s, Hurst hurst, const Vector2d& xi);

/// Angles in [0, 2π) where S may jump, sorted and deduplicated.
std::vector<double> breakpoints(const AnisotropySpec& s);

}  // namespace orifield
