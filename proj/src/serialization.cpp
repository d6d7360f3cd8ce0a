#include "orifield/serialization.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace orifield {

namespace {

[[noreturn]] void format_error(const std::string& what) { throw Error(ErrorCode::Format, what); }

const Json& member(const Json& j, const char* key, const char* where) {
  if (!j.is_object()) format_error(std::string(where) + ": expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) format_error(std::string(where) + ": missing field '" + key + "'");
  return *it;
}

double number(const Json& j, const char* key, const char* where) {
  const Json& v = member(j, key, where);
  if (!v.is_number()) format_error(std::string(where) + ": field '" + key + "' must be a number");
  return v.get<double>();
}

double number_or(const Json& j, const char* key, double fallback, const char* where) {
  if (!j.contains(key)) return fallback;
  return number(j, key, where);
}

std::string kind_of(const Json& j, const char* key, const char* where) {
  const Json& v = member(j, key, where);
  if (!v.is_string()) format_error(std::string(where) + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

Json matrix_json(const Matrix2d& m) {
  return Json::array({Json::array({m(0, 0), m(0, 1)}), Json::array({m(1, 0), m(1, 1)})});
}

Matrix2d matrix_from_json(const Json& j, const char* where) {
  auto bad = [&] { format_error(std::string(where) + ": 'L' must be [[a, b], [c, d]]"); };
  if (!j.is_array() || j.size() != 2) bad();
  Matrix2d m;
  for (int r = 0; r < 2; ++r) {
    if (!j[r].is_array() || j[r].size() != 2) bad();
    for (int c = 0; c < 2; ++c) {
      if (!j[r][c].is_number()) bad();
      m(r, c) = j[r][c].get<double>();
    }
  }
  return m;
}

}  // namespace

double round12(double x) {
  if (!std::isfinite(x) || x == 0) return x;
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return std::stod(os.str());
}

// ---------------------------------------------------------------- anisotropy

Json to_json(const AnisotropySpec& s) {
  if (const auto* n = s.as<spec::Isotropic>()) return {{"kind", "isotropic"}, {"level", n->level}};
  if (const auto* n = s.as<spec::Cone>())
    return {{"kind", "cone"}, {"alpha0", n->alpha0}, {"delta", n->delta}, {"level", n->level}};
  if (const auto* n = s.as<spec::Sum>())
    return {{"kind", "sum"}, {"left", to_json(*n->left)}, {"right", to_json(*n->right)}};
  if (const auto* n = s.as<spec::LinearlyTransformed>())
    return {{"kind", "linear"}, {"base", to_json(*n->base)}, {"hurst", n->hurst},
            {"L", matrix_json(n->L)}};
  format_error("callback anisotropy cannot be serialized");
}

AnisotropySpec anisotropy_from_json(const Json& j) {
  constexpr const char* where = "anisotropy";
  const std::string kind = kind_of(j, "kind", where);
  try {
    if (kind == "isotropic")
      return AnisotropySpec::isotropic(number_or(j, "level", 0.5 / std::numbers::pi, where));
    if (kind == "cone") {
      const double alpha0 = number(j, "alpha0", where);
      const double delta = number(j, "delta", where);
      if (j.contains("level"))
        return AnisotropySpec::cone(alpha0, delta, number(j, "level", where));
      return AnisotropySpec::cone(alpha0, delta);
    }
    if (kind == "sum")
      return AnisotropySpec::sum(anisotropy_from_json(member(j, "left", where)),
                                 anisotropy_from_json(member(j, "right", where)));
    if (kind == "linear")
      return AnisotropySpec::linearly_transformed(anisotropy_from_json(member(j, "base", where)),
                                                  Hurst(number(j, "hurst", where)),
                                                  matrix_from_json(member(j, "L", where), where));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Format) throw;
    format_error(std::string(where) + ": " + e.what());
  }
  format_error("anisotropy: unknown kind '" + kind + "'");
}

// ---------------------------------------------------------------- tensors

Json to_json(const StructureTensord& t) {
  return {{"j11", round12(t.j11)}, {"j12", round12(t.j12)}, {"j22", round12(t.j22)}};
}

StructureTensord tensor_from_json(const Json& j) {
  return {number(j, "j11", "tensor"), number(j, "j12", "tensor"), number(j, "j22", "tensor")};
}

Json to_json(const OrientationResultd& r) {
  return {{"angle", round12(r.angle)},
          {"angle_deg", round12(r.angle * 180 / std::numbers::pi)},
          {"direction", Json::array({round12(r.direction.x()), round12(r.direction.y())})},
          {"coherency", round12(r.coherency)},
          {"lambda_max", round12(r.lambda_max)},
          {"lambda_min", round12(r.lambda_min)},
          {"degenerate", r.degenerate}};
}

// ---------------------------------------------------------------- scalar fields

Json to_json(const ScalarField& f) {
  if (!f.expr()) format_error("callback scalar field cannot be serialized");
  const ScalarExpr& e = *f.expr();
  if (e.is_constant()) return e.c;
  Json j = {{"c", e.c}};
  if (e.a1 != 0) j["a1"] = e.a1;
  if (e.a2 != 0) j["a2"] = e.a2;
  if (e.q1 != 0) j["q1"] = e.q1;
  if (e.q2 != 0) j["q2"] = e.q2;
  return j;
}

ScalarField scalar_field_from_json(const Json& j) {
  if (j.is_number()) return ScalarField::constant(j.get<double>());
  if (!j.is_object()) format_error("scalar field: expected a number or an object");
  for (const auto& [key, value] : j.items())
    if (key != "c" && key != "a1" && key != "a2" && key != "q1" && key != "q2")
      format_error("scalar field: unknown field '" + key + "'");
  constexpr const char* where = "scalar field";
  ScalarExpr e;
  e.c = number_or(j, "c", 0, where);
  e.a1 = number_or(j, "a1", 0, where);
  e.a2 = number_or(j, "a2", 0, where);
  e.q1 = number_or(j, "q1", 0, where);
  e.q2 = number_or(j, "q2", 0, where);
  return ScalarField::expression(e);
}

// ---------------------------------------------------------------- deformations

Json to_json(const Deformation& d) {
  switch (d.kind()) {
    case DeformationKind::Identity: return {{"kind", "identity"}};
    case DeformationKind::LocalRotation:
      return {{"kind", "local_rotation"}, {"alpha", to_json(*d.rotation_field())}};
    case DeformationKind::AffineConformal: {
      const Eigen::Vector3d& p = *d.conformal_params();
      return {{"kind", "affine_conformal"}, {"a", p[0]}, {"b", p[1]}, {"c", p[2]}};
    }
    case DeformationKind::UserSupplied: break;
  }
  format_error("user-supplied deformation cannot be serialized");
}

Deformation deformation_from_json(const Json& j) {
  constexpr const char* where = "deformation";
  const std::string kind = kind_of(j, "kind", where);
  if (kind == "identity") return Deformation::identity();
  if (kind == "local_rotation")
    return local_rotation_deformation(scalar_field_from_json(member(j, "alpha", where)));
  if (kind == "affine_conformal") {
    const double a = number(j, "a", where);
    const double b = number(j, "b", where);
    const double c = number_or(j, "c", 0.0, where);
    if (j.value("fallback_rotation", false)) return conformal_or_rotation(a, b, c);
    return affine_conformal_deformation(a, b, c);
  }
  format_error("deformation: unknown kind '" + kind + "'");
}

// ---------------------------------------------------------------- models

Json to_json(const FieldModel& m) {
  Json j = {{"family", m.family()}};
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, model::FBF>) {
          j["hurst"] = v.hurst;
        } else if constexpr (std::is_same_v<T, model::AFBF>) {
          j["hurst"] = v.hurst;
          j["alpha0"] = v.alpha0;
          j["delta"] = v.delta;
        } else if constexpr (std::is_same_v<T, model::SumAFBF>) {
          j["hurst"] = v.hurst;
          j["alpha0"] = v.alpha0;
          j["alpha1"] = v.alpha1;
          j["delta"] = v.delta;
        } else if constexpr (std::is_same_v<T, model::LinearDeformed>) {
          j["base"] = to_json(*v.base);
          j["L"] = matrix_json(v.L);
        } else if constexpr (std::is_same_v<T, model::SelfSimilar>) {
          j["hurst"] = v.hurst;
          j["anisotropy"] = to_json(v.anisotropy);
        } else if constexpr (std::is_same_v<T, model::MBF>) {
          j["hurst"] = to_json(v.hurst);
        } else if constexpr (std::is_same_v<T, model::GAFBF>) {
          if (v.amplitude) format_error("GAFBF with a callback amplitude cannot be serialized");
          j["hurst"] = to_json(v.hurst);
          j["alpha"] = to_json(v.alpha);
          j["delta"] = v.delta;
        } else {
          j["deformation"] = to_json(v.phi);
          j["base"] = {{"hurst", v.base.hurst}, {"alpha0", v.base.alpha0}, {"delta", v.base.delta}};
        }
      },
      m.variant());
  return j;
}

FieldModel model_from_json(const Json& j) {
  constexpr const char* where = "model";
  const std::string family = kind_of(j, "family", where);
  try {
    if (family == "fbf") return FieldModel::fbf(Hurst(number(j, "hurst", where)));
    if (family == "afbf")
      return FieldModel::afbf(Hurst(number(j, "hurst", where)), number(j, "alpha0", where),
                              number(j, "delta", where));
    if (family == "sum_afbf")
      return FieldModel::sum_afbf(Hurst(number(j, "hurst", where)), number(j, "alpha0", where),
                                  number(j, "alpha1", where), number(j, "delta", where));
    if (family == "linear")
      return FieldModel::linear_deformed(model_from_json(member(j, "base", where)),
                                         matrix_from_json(member(j, "L", where), where));
    if (family == "self_similar")
      return FieldModel::self_similar(Hurst(number(j, "hurst", where)),
                                      anisotropy_from_json(member(j, "anisotropy", where)));
    if (family == "mbf") return FieldModel::mbf(scalar_field_from_json(member(j, "hurst", where)));
    if (family == "gafbf")
      return FieldModel::gafbf(scalar_field_from_json(member(j, "hurst", where)),
                               scalar_field_from_json(member(j, "alpha", where)),
                               number(j, "delta", where));
    if (family == "wafbf") {
      const Json& base = member(j, "base", where);
      return FieldModel::wafbf(deformation_from_json(member(j, "deformation", where)),
                               Hurst(number(base, "hurst", "model.base")),
                               number_or(base, "alpha0", 0.0, "model.base"),
                               number(base, "delta", "model.base"));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Format) throw;
    format_error(std::string(where) + ": " + e.what());
  }
  format_error("model: unknown family '" + family + "'");
}

// ---------------------------------------------------------------- grid, params

Json to_json(const Grid& g) { return {{"n", g.n}, {"domain", Json::array({g.x0, g.x1})}}; }

Grid grid_from_json(const Json& j) {
  Grid g;
  const Json& n = member(j, "n", "grid");
  if (!n.is_number_integer()) format_error("grid: 'n' must be an integer");
  g.n = n.get<int>();
  if (j.contains("domain")) {
    const Json& d = j["domain"];
    if (!d.is_array() || d.size() != 2 || !d[0].is_number() || !d[1].is_number())
      format_error("grid: 'domain' must be [x0, x1]");
    g.x0 = d[0].get<double>();
    g.x1 = d[1].get<double>();
  }
  try {
    g.validate();
  } catch (const Error& e) {
    format_error(std::string("grid: ") + e.what());
  }
  return g;
}

Json to_json(const SynthesisParams& p) {
  Json j = {{"method", p.method}, {"freq_n", p.freq_n}, {"imag_residue", p.imag_residue}};
  if (p.method == "warp") {
    j["margin"] = p.margin;
    j["interp"] = to_string(p.interp);
    if (p.base_grid) j["base_grid"] = to_json(*p.base_grid);
  }
  return j;
}

SynthesisParams synthesis_params_from_json(const Json& j) {
  SynthesisParams p;
  p.method = kind_of(j, "method", "synthesis");
  p.freq_n = int(number_or(j, "freq_n", 0, "synthesis"));
  p.imag_residue = number_or(j, "imag_residue", 0, "synthesis");
  p.margin = number_or(j, "margin", 0, "synthesis");
  if (j.contains("interp")) p.interp = interpolation_from_string(kind_of(j, "interp", "synthesis"));
  if (j.contains("base_grid")) p.base_grid = grid_from_json(j["base_grid"]);
  return p;
}

// ---------------------------------------------------------------- files

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) format_error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    format_error(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  out << j.dump(2) << '\n';
  if (!out) format_error("cannot write " + path);
}

}  // namespace orifield
