#include "orifield/spectral.hpp"

#include <algorithm>
#include <iostream>
#include <mutex>
#include <sstream>

namespace orifield {

namespace {

constexpr double kPi = std::numbers::pi;

std::mutex& handler_mutex() {
  static std::mutex m;
  return m;
}

DiagnosticHandler& handler() {
  static DiagnosticHandler h = [](std::string_view msg) { std::cerr << "orifield: " << msg << '\n'; };
  return h;
}

// Angular distance on the full circle, in [0, π].
double circular_distance(double a, double b) { return std::abs(std::remainder(a - b, 2 * kPi)); }

}  // namespace

Hurst::Hurst(double value) : value_(value) {
  if (!(value > 0.0 && value < 1.0)) {
    std::ostringstream os;
    os << "Hurst exponent must lie in (0,1), got " << value;
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
}

void set_diagnostic_handler(DiagnosticHandler h) {
  std::lock_guard lock(handler_mutex());
  handler() = h ? std::move(h) : [](std::string_view) {};
}

void emit_diagnostic(std::string_view message) {
  DiagnosticHandler h;
  {
    std::lock_guard lock(handler_mutex());
    h = handler();
  }
  h(message);
}

AnisotropySpec AnisotropySpec::isotropic(double level) {
  if (!(level >= 0.0) || !std::isfinite(level))
    throw Error(ErrorCode::InvalidArgument, "isotropic level must be finite and non-negative");
  return AnisotropySpec(spec::Isotropic{level});
}

AnisotropySpec AnisotropySpec::cone(double alpha0, double delta) {
  return cone(alpha0, delta, 1.0 / (2.0 * delta));
}

AnisotropySpec AnisotropySpec::cone(double alpha0, double delta, double level) {
  if (!std::isfinite(alpha0)) throw Error(ErrorCode::InvalidArgument, "cone alpha0 must be finite");
  if (!(delta > 0.0) || delta > kPi)
    throw Error(ErrorCode::InvalidArgument, "cone delta must lie in (0, pi]");
  if (!(level >= 0.0) || !std::isfinite(level))
    throw Error(ErrorCode::InvalidArgument, "cone level must be finite and non-negative");
  return AnisotropySpec(spec::Cone{wrap_axial(alpha0), delta, level});
}

AnisotropySpec AnisotropySpec::sum(AnisotropySpec left, AnisotropySpec right) {
  bool overlapping = false;
  const auto* a = left.as<spec::Cone>();
  const auto* b = right.as<spec::Cone>();
  if (a && b) {
    const double separation = std::abs(wrap_axial(b->alpha0 - a->alpha0));
    const double half_width = std::max(a->delta, b->delta);
    if (!(half_width < separation / 2.0)) {
      overlapping = true;
      std::ostringstream os;
      os << "sum of cones with overlapping supports (delta=" << half_width
         << ", axial separation=" << separation << ")";
      emit_diagnostic(os.str());
    }
  }
  return AnisotropySpec(spec::Sum{std::make_shared<const AnisotropySpec>(std::move(left)),
                                  std::make_shared<const AnisotropySpec>(std::move(right)),
                                  overlapping});
}

AnisotropySpec AnisotropySpec::linearly_transformed(AnisotropySpec base, Hurst hurst,
                                                    const Matrix2d& L) {
  const double det = L.determinant();
  if (!std::isfinite(det) || det == 0.0 ||
      std::abs(det) <= 1e-14 * L.squaredNorm())
    throw Error(ErrorCode::NonInvertible, "linear deformation matrix is singular");
  return AnisotropySpec(spec::LinearlyTransformed{
      std::make_shared<const AnisotropySpec>(std::move(base)), hurst.value(), L, std::abs(det)});
}

AnisotropySpec AnisotropySpec::callback(std::function<double(double)> evaluate,
                                        std::vector<double> breaks) {
  if (!evaluate) throw Error(ErrorCode::InvalidArgument, "empty anisotropy callback");
  return AnisotropySpec(spec::Callback{std::move(evaluate), std::move(breaks)});
}

double eval_anisotropy(const AnisotropySpec& s, double theta) {
  struct Visitor {
    double theta;
    double operator()(const spec::Isotropic& iso) const { return iso.level; }
    double operator()(const spec::Cone& c) const {
      // Closed interval on both lobes.
      const bool front = circular_distance(theta, c.alpha0) <= c.delta;
      const bool back = circular_distance(theta, c.alpha0 + kPi) <= c.delta;
      return 0.5 * c.level * (double(front) + double(back));
    }
    double operator()(const spec::Sum& sum) const {
      return eval_anisotropy(*sum.left, theta) + eval_anisotropy(*sum.right, theta);
    }
    double operator()(const spec::LinearlyTransformed& t) const {
      const Vector2d v = t.L.transpose() * unit_vector(theta);
      const double r = v.norm();
      return t.abs_det * std::pow(r, -2.0 * t.hurst - 2.0) *
             eval_anisotropy(*t.base, std::atan2(v.y(), v.x()));
    }
    double operator()(const spec::Callback& cb) const { return cb.evaluate(theta); }
  };
  if (!std::isfinite(theta)) throw Error(ErrorCode::InvalidArgument, "theta must be finite");
  return std::visit(Visitor{theta}, s.node());
}

double eval_spectral_density(const AnisotropySpec& s, Hurst hurst, const Vector2d& xi) {
  const double r = xi.norm();
  if (r == 0.0) throw Error(ErrorCode::ZeroFrequency, "spectral density is singular at xi = 0");
  return std::pow(r, -2.0 * hurst.value() - 2.0) * eval_anisotropy(s, std::atan2(xi.y(), xi.x()));
}

std::vector<double> breakpoints(const AnisotropySpec& s) {
  std::vector<double> out;
  struct Visitor {
    std::vector<double>& out;
    void operator()(const spec::Isotropic&) const {}
    void operator()(const spec::Cone& c) const {
      if (c.delta >= kPi) return;
      for (double edge : {c.alpha0 - c.delta, c.alpha0 + c.delta})
        for (double shift : {0.0, kPi}) out.push_back(wrap_two_pi(edge + shift));
    }
    void operator()(const spec::Sum& sum) const {
      for (double b : breakpoints(*sum.left)) out.push_back(b);
      for (double b : breakpoints(*sum.right)) out.push_back(b);
    }
    void operator()(const spec::LinearlyTransformed& t) const {
      // arg(LᵀΘ) = β  ⇔  Θ ∥ L⁻ᵀ u(β)
      const Matrix2d inv_t = t.L.inverse().transpose();
      for (double b : breakpoints(*t.base)) {
        const Vector2d d = inv_t * unit_vector(b);
        out.push_back(wrap_two_pi(std::atan2(d.y(), d.x())));
      }
    }
    void operator()(const spec::Callback& cb) const {
      for (double b : cb.breakpoints) out.push_back(wrap_two_pi(b));
    }
  };
  std::visit(Visitor{out}, s.node());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-15; }),
            out.end());
  return out;
}

}  // namespace orifield
