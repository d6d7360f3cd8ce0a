// orifield: synthesize anisotropic textures, estimate their orientation and
// run the validation suites.

#include <CLI11.hpp>

#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>

#include "orifield/io.hpp"
#include "orifield/monogenic.hpp"
#include "orifield/serialization.hpp"
#include "orifield/synth.hpp"
#include "orifield/validation.hpp"

namespace fs = std::filesystem;
using namespace orifield;

namespace {

constexpr int kOk = 0;
constexpr int kValidationFailed = 1;
constexpr int kUsage = 2;

[[noreturn]] void usage_error(const std::string& what) { throw Error(ErrorCode::Format, what); }

// A JSON value given inline or as a path to a file.
Json inline_or_file(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\n");
  if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) {
    try {
      return Json::parse(text);
    } catch (const Json::exception& e) {
      usage_error(std::string("inline JSON: ") + e.what());
    }
  }
  return read_json_file(text);
}

// Accepts either a JSON value or a string naming a file holding one.
Json resolve_reference(const Json& j) { return j.is_string() ? inline_or_file(j.get<std::string>()) : j; }

template <typename T>
T get(const Json& cfg, const char* key) {
  if (!cfg.contains(key)) usage_error(std::string("missing '") + key + "'");
  try {
    return cfg[key].get<T>();
  } catch (const Json::exception&) {
    usage_error(std::string("'") + key + "' has the wrong type: " + cfg[key].dump());
  }
}

std::string output_stem(const Json& cfg, const std::string& fallback) {
  std::string out = cfg.contains("out") && !cfg["out"].is_null() ? get<std::string>(cfg, "out") : fallback;
  fs::path p(out);
  if (p.is_relative()) p = fs::path(get<std::string>(cfg, "out_dir")) / p;
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  return p.string();
}

// Printed summaries and snapshots share the 12-digit convention.
void print(const Json& j) { std::cout << j.dump(2) << std::endl; }

Json snapshot(const std::string& command, const Json& cfg) {
  Json globals = Json::object();
  Json local = Json::object();
  for (const auto& [key, value] : cfg.items()) {
    if (key == "seed" || key == "threads" || key == "out_dir")
      globals[key] = value;
    else
      local[key] = value;
  }
  globals["command"] = command;
  globals[command] = std::move(local);
  return globals;
}

void write_snapshot(const std::string& stem, const std::string& command, const Json& cfg) {
  write_json_file(stem + ".config.json", snapshot(command, cfg));
}

// ---------------------------------------------------------------- commands

int cmd_synth(const Json& cfg) {
  if (cfg["model"].is_null()) usage_error("synth needs --model");
  const Json model_json = resolve_reference(cfg["model"]);
  const FieldModel model = model_from_json(model_json);
  Json grid_json = {{"n", cfg["n"]}, {"domain", cfg["domain"]}};
  const Grid grid = grid_from_json(grid_json);
  const auto seed = get<std::uint64_t>(cfg, "seed");

  SynthOptions so;
  so.threads = get<int>(cfg, "threads");
  const FieldRealization r = synthesize(model, grid, seed, get<int>(cfg, "freq_n"),
                                        get<double>(cfg, "margin"),
                                        interpolation_from_string(get<std::string>(cfg, "interp")),
                                        get<int>(cfg, "base_n"), so);

  const std::string stem = output_stem(cfg, "field");
  write_realization(stem, r);
  if (get<bool>(cfg, "pgm")) write_pgm(stem + ".pgm", r.values);
  Json resolved = cfg;
  resolved["model"] = model_json;
  write_snapshot(stem, "synth", resolved);
  print({{"out", stem}, {"family", model.family()}, {"n", grid.n}, {"seed", seed},
         {"synthesis", to_json(r.params)}});
  return kOk;
}

// A zero tensor (constant image) has no orientation; report it as degenerate.
Json orientation_json(const StructureTensord& J) {
  if (J.trace() > 0) return to_json(orientation_of(J));
  return {{"angle", nullptr}, {"angle_deg", nullptr}, {"direction", nullptr}, {"coherency", 0.0},
          {"lambda_max", 0.0}, {"lambda_min", 0.0}, {"degenerate", true}};
}

Json summarize_scale(const WaveletPyramid& pyr, int scale) {
  const StructureTensord J = empirical_structure_tensor(pyr, scale);
  return {{"scale", scale}, {"tensor", to_json(J)}, {"orientation", orientation_json(J)}};
}

int cmd_analyze(const Json& cfg) {
  if (cfg["input"].is_null()) usage_error("analyze needs an input raster");
  const std::string input = get<std::string>(cfg, "input");
  const RasterFile file = read_raster(input);
  if (file.channels.size() != 1) usage_error(input + ": expected a single-channel raster");
  const Raster& image = file.channels.front();
  const int n = int(image.rows());
  const int threads = get<int>(cfg, "threads");

  std::vector<int> scales = get<std::vector<int>>(cfg, "scales");
  if (scales.empty())
    for (int i = 0; i <= std::min(2, max_scale(n)); ++i) scales.push_back(i);
  const RadialProfile profile = RadialProfile::from_name(get<std::string>(cfg, "profile"));
  const std::string boundary = get<std::string>(cfg, "boundary");
  if (boundary != "smooth" && boundary != "periodic") usage_error("boundary must be smooth or periodic");
  const Raster source = boundary == "smooth" ? periodic_component(image, threads) : image;
  const WaveletPyramid pyr = wavelet_pyramid(source, scales, profile, threads);

  Json per_scale = Json::array();
  StructureTensord pooled;
  for (int i : scales) {
    per_scale.push_back(summarize_scale(pyr, i));
    const StructureTensord J = empirical_structure_tensor(pyr, i);
    // Scales differ in energy by 2^{2iH}; pool them with equal weight.
    if (J.trace() > 0) pooled = pooled + (1.0 / J.trace()) * J;
  }
  if (pooled.trace() > 0) pooled = (1.0 / pooled.trace()) * pooled;
  const bool degenerate = !(pooled.trace() > 0) || orientation_of(pooled).degenerate;

  Json hurst = nullptr;
  std::string hurst_note;
  if (scales.size() >= 2) {
    try {
      hurst = round12(estimate_hurst(pyr, scales));
    } catch (const Error& e) {
      hurst_note = e.what();
    }
  } else {
    hurst_note = "needs at least two scales";
  }

  Json summary = {{"input", raster_stem(input)},
                  {"n", n},
                  {"profile", profile.name()},
                  {"boundary", boundary},
                  {"scales", per_scale},
                  {"global", {{"tensor", to_json(pooled)}, {"orientation", orientation_json(pooled)}}},
                  {"hurst", hurst}};
  if (!hurst_note.empty()) summary["hurst_note"] = hurst_note;
  summary["degenerate"] = degenerate;

  const std::string stem = output_stem(cfg, fs::path(raster_stem(input)).filename().string() + ".analysis");
  const double window = get<double>(cfg, "window");
  if (window > 0) {
    int field_scale = scales.front();
    if (cfg.contains("field_scale") && !cfg["field_scale"].is_null()) field_scale = get<int>(cfg, "field_scale");
    const int one[] = {field_scale};
    const WaveletPyramid fp =
        pyr.find(field_scale) ? pyr : wavelet_pyramid(source, one, profile, threads);
    const OrientationField field = windowed_orientation_field(fp, field_scale, window);
    const double crop = get<double>(cfg, "crop");
    const AxialStats stats = axial_statistics(field, crop);
    write_orientation_field(stem + ".field", field,
                            {{"scale", field_scale}, {"window", window}, {"profile", profile.name()}});
    if (get<bool>(cfg, "ppm")) write_angle_ppm(stem + ".field.ppm", field);
    summary["field"] = {{"out", stem + ".field"},
                        {"scale", field_scale},
                        {"window", window},
                        {"crop", crop},
                        {"valid", stats.count},
                        {"mean_angle", round12(stats.mean)},
                        {"angle_std", round12(stats.std)},
                        {"coherency", round12(stats.coherency)}};
  }

  write_json_file(stem + ".summary.json", summary);
  write_snapshot(stem, "analyze", cfg);
  print(summary);
  return kOk;
}

Matrix2d matrix_from_json(const Json& j) {
  std::vector<double> v;
  if (j.is_array() && j.size() == 2 && j[0].is_array()) {
    for (const Json& row : j)
      for (const Json& x : row) v.push_back(x.get<double>());
  } else {
    v = j.get<std::vector<double>>();
  }
  if (v.size() != 4) usage_error("L must have 4 entries");
  Matrix2d L;
  L << v[0], v[1], v[2], v[3];
  return L;
}

std::optional<StructureTensord> closed_form(const AnisotropySpec& s) {
  if (s.as<spec::Isotropic>()) return StructureTensord{0.5, 0.0, 0.5};
  if (const auto* c = s.as<spec::Cone>()) return afbf_tensor_closed(c->alpha0, c->delta);
  if (const auto* sum = s.as<spec::Sum>()) {
    const auto* a = sum->left->as<spec::Cone>();
    const auto* b = sum->right->as<spec::Cone>();
    if (a && b && a->delta == b->delta && a->level == b->level && !sum->overlapping)
      return sum_afbf_tensor_closed(a->alpha0, b->alpha0, a->delta);
  }
  return std::nullopt;
}

int cmd_tensor(const Json& cfg) {
  if (cfg["spec"].is_null()) usage_error("tensor needs --spec");
  const Json spec_json = resolve_reference(cfg["spec"]);
  AnisotropySpec s = anisotropy_from_json(spec_json);
  const int nodes = get<int>(cfg, "nodes");

  const StructureTensord J = structure_tensor_quadrature(s, nodes);
  Json out = {{"spec", spec_json}, {"quadrature", to_json(J)}};
  if (const auto c = closed_form(s)) out["closed_form"] = to_json(*c);
  out["orientation"] = to_json(orientation_of(J));

  if (cfg.contains("L") && !cfg["L"].is_null()) {
    const Matrix2d L = matrix_from_json(cfg["L"]);
    const double hurst = get<double>(cfg, "hurst");
    const AnisotropySpec t = AnisotropySpec::linearly_transformed(s, Hurst(hurst), L);
    const StructureTensord JL = structure_tensor_quadrature(t, nodes);
    Json deformed = {{"L", {{L(0, 0), L(0, 1)}, {L(1, 0), L(1, 1)}}},
                     {"hurst", hurst},
                     {"quadrature", to_json(JL)},
                     {"orientation", to_json(orientation_of(JL))}};
    // The rule (L⁻¹)ᵀn is exact for a single direction and off by O(δ²) for cones.
    const OrientationResultd o = orientation_of(J);
    if (!o.degenerate) {
      const Vector2d d = deformed_orientation(o.direction, L);
      deformed["predicted_direction"] = {round12(d.x()), round12(d.y())};
      deformed["predicted_angle"] = round12(wrap_axial(std::atan2(d.y(), d.x())));
    }
    out["deformed"] = std::move(deformed);
  }
  const std::string stem = output_stem(cfg, "tensor");
  write_json_file(stem + ".json", out);
  write_snapshot(stem, "tensor", cfg);
  print(out);
  return kOk;
}

int cmd_validate(const Json& cfg) {
  if (cfg["suite"].is_null()) usage_error("validate needs a suite name");
  const std::string suite = get<std::string>(cfg, "suite");
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end())
    usage_error("unknown suite '" + suite + "'");
  ValidationOptions opts;
  opts.seeds = get<int>(cfg, "seeds");
  opts.base_seed = get<std::uint64_t>(cfg, "seed");
  opts.threads = get<int>(cfg, "threads");
  if (opts.seeds < 1) usage_error("--seeds must be positive");

  const SuiteReport report = run_suite(suite, opts);
  const Json j = to_json(report);
  const std::string stem = output_stem(cfg, "validate-" + suite);
  write_json_file(stem + ".json", j);
  write_snapshot(stem, "validate", cfg);
  print(j);
  for (const CheckResult& c : report.checks)
    std::cerr << (c.pass ? "PASS " : "FAIL ") << c.name << "  " << c.value << " (tol "
              << c.tolerance << ")\n";
  return report.passed() ? kOk : kValidationFailed;
}

// ---------------------------------------------------------------- parsing

Json defaults(const std::string& command) {
  Json d = {{"seed", 1}, {"threads", 0}, {"out_dir", "."}};
  if (command == "synth") {
    d.update(Json{{"model", nullptr}, {"n", 512}, {"domain", {0.0, 1.0}}, {"freq_n", 0},
                  {"margin", kDefaultWarpMargin}, {"interp", "bilinear"}, {"base_n", 0},
                  {"pgm", false}, {"out", nullptr}});
  } else if (command == "analyze") {
    d.update(Json{{"input", nullptr}, {"scales", Json::array()}, {"profile", "simoncelli"},
                  {"boundary", "smooth"},
                  {"window", 0.0}, {"field_scale", nullptr}, {"crop", 1.0}, {"ppm", false},
                  {"out", nullptr}});
  } else if (command == "tensor") {
    d.update(Json{{"spec", nullptr}, {"L", nullptr}, {"hurst", 0.5}, {"nodes", 4096}, {"out", nullptr}});
  } else if (command == "validate") {
    d.update(Json{{"suite", nullptr}, {"seeds", 10}, {"out", nullptr}});
  }
  return d;
}

// Config-file keys a command does not know are rejected so typos surface.
void overlay(Json& cfg, const Json& source, const std::string& where) {
  for (const auto& [key, value] : source.items()) {
    if (!cfg.contains(key)) usage_error(where + ": unknown key '" + key + "'");
    cfg[key] = value;
  }
}

Json from_config_file(const std::string& path, const std::string& command) {
  const Json file = read_json_file(path);
  if (!file.is_object()) usage_error(path + ": expected an object");
  Json cfg = defaults(command);
  for (const auto& [key, value] : file.items()) {
    if (key == "seed" || key == "threads" || key == "out_dir") {
      cfg[key] = value;
    } else if (key == "command") {
      if (value != command) usage_error(path + ": written for '" + value.dump() + "', not '" + command + "'");
    } else if (key == command) {
      if (!value.is_object()) usage_error(path + ": '" + key + "' must be an object");
      overlay(cfg, value, path);
    } else if (key != "synth" && key != "analyze" && key != "tensor" && key != "validate") {
      usage_error(path + ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anisotropic fractional Brownian textures: synthesis and orientation analysis"};
  app.require_subcommand(1);
  app.fallthrough();
  // Flags are recorded only when given, so they override the config file.
  std::vector<std::pair<CLI::Option*, std::function<void(Json&)>>> given;
  auto flag = [&given](CLI::App* a, const std::string& name, const std::string& key, auto& var,
                       const std::string& help) {
    CLI::Option* opt = a->add_option(name, var, help);
    given.emplace_back(opt, [key, &var](Json& j) { j[key] = var; });
    return opt;
  };
  auto toggle = [&given](CLI::App* a, const std::string& name, const std::string& key, bool& var,
                         const std::string& help) {
    CLI::Option* opt = a->add_flag(name, var, help);
    given.emplace_back(opt, [key, &var](Json& j) { j[key] = var; });
  };

  std::uint64_t seed = 1;
  int threads = 0;
  std::string out_dir, config;
  flag(&app, "--seed", "seed", seed, "Random seed");
  flag(&app, "--threads", "threads", threads, "Worker threads (default ORIFIELD_THREADS or 1)");
  flag(&app, "--out-dir", "out_dir", out_dir, "Directory for outputs");
  app.add_option("--config", config, "JSON config file; flags override it");

  auto* synth = app.add_subcommand("synth", "Synthesize a field");
  std::string model, interp, out;
  int n = 0, freq_n = 0, base_n = 0;
  std::vector<double> domain;
  double margin = 0;
  bool pgm = false;
  flag(synth, "--model", "model", model, "Model JSON, inline or a file");
  flag(synth, "--n", "n", n, "Grid size");
  flag(synth, "--domain", "domain", domain, "x0,x1")->expected(2)->delimiter(',');
  flag(synth, "--freq-n", "freq_n", freq_n, "Frequency lattice size");
  flag(synth, "--margin", "margin", margin, "Warp margin as a fraction of the extent");
  flag(synth, "--interp", "interp", interp, "bilinear or bicubic")
      ->check(CLI::IsMember({"bilinear", "bicubic"}));
  flag(synth, "--base-n", "base_n", base_n, "Base grid size for warped fields");
  toggle(synth, "--pgm", "pgm", pgm, "Also write an 8-bit PGM");
  flag(synth, "--out", "out", out, "Output stem");

  auto* analyze = app.add_subcommand("analyze", "Estimate orientation and Hurst index of a raster");
  std::string input, profile, boundary;
  std::vector<int> scales;
  double window = 0, crop = 1;
  int field_scale = 0;
  bool ppm = false;
  flag(analyze, "input", "input", input, "Raster (.f64 or .json)");
  flag(analyze, "--scales", "scales", scales, "Comma-separated scales")->delimiter(',');
  flag(analyze, "--profile", "profile", profile, "simoncelli or meyer")
      ->check(CLI::IsMember({"simoncelli", "meyer"}));
  flag(analyze, "--boundary", "boundary", boundary, "smooth (periodic-plus-smooth split) or periodic")
      ->check(CLI::IsMember({"smooth", "periodic"}));
  flag(analyze, "--window", "window", window, "Gaussian window for a per-pixel field (0: none)");
  flag(analyze, "--field-scale", "field_scale", field_scale, "Scale of the per-pixel field");
  flag(analyze, "--crop", "crop", crop, "Central fraction used for field statistics");
  toggle(analyze, "--ppm", "ppm", ppm, "Write the field as an angle map");
  flag(analyze, "--out", "out", out, "Output stem");

  auto* tensor = app.add_subcommand("tensor", "Structure tensor of an anisotropy function");
  std::string spec;
  std::vector<double> L;
  double hurst = 0.5;
  int nodes = 0;
  flag(tensor, "--spec", "spec", spec, "Anisotropy JSON, inline or a file");
  flag(tensor, "--L", "L", L, "a,b,c,d: row-major 2x2 deformation")->expected(4)->delimiter(',');
  flag(tensor, "--hurst", "hurst", hurst, "Hurst index used with --L");
  flag(tensor, "--nodes", "nodes", nodes, "Quadrature nodes per arc");
  flag(tensor, "--out", "out", out, "Output stem");

  auto* validate = app.add_subcommand("validate", "Run a validation suite");
  std::string suite;
  int seeds = 10;
  flag(validate, "suite", "suite", suite, "closedform, frame, riesz or montecarlo");
  flag(validate, "--seeds", "seeds", seeds, "Monte-Carlo seeds");
  flag(validate, "--out", "out", out, "Output stem");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    Json cfg = config.empty() ? defaults(command) : from_config_file(config, command);
    for (const auto& [opt, record] : given)
      if (opt->count() > 0) record(cfg);
    if (command == "synth") return cmd_synth(cfg);
    if (command == "analyze") return cmd_analyze(cfg);
    if (command == "tensor") return cmd_tensor(cfg);
    return cmd_validate(cfg);
  } catch (const Error& e) {
    std::cerr << "orifield " << command << ": " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "orifield " << command << ": " << e.what() << "\n";
    return kUsage;
  }
}
