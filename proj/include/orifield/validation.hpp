#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "orifield/serialization.hpp"

namespace orifield {

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0;      // observed error or statistic
  double tolerance = 0;  // bound it was compared against
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  double seconds = 0;

  bool passed() const;
  void add(std::string name, double value, double tolerance, std::string detail = {});
  void add_bool(std::string name, bool ok, std::string detail = {});
  void append(const SuiteReport& other);
};

struct ValidationOptions {
  int seeds = 10;
  std::uint64_t base_seed = 1;
  int threads = 0;
};

/// Oracle groups, each bounded by a fixed tolerance.
SuiteReport closed_form_checks(const ValidationOptions& opts);   // tensors of FBF, AFBF, sums
SuiteReport deformation_checks(const ValidationOptions& opts);   // linear deformations
SuiteReport frame_checks(const ValidationOptions& opts);         // wavelet frame
SuiteReport riesz_checks(const ValidationOptions& opts);         // Riesz transform
SuiteReport conformal_checks(const ValidationOptions& opts);     // conformal warps
SuiteReport montecarlo_checks(const ValidationOptions& opts);    // recovery from synthesized fields
SuiteReport determinism_checks(const ValidationOptions& opts);   // bit-identical synthesis

/// "closedform", "frame", "riesz" or "montecarlo"; InvalidArgument otherwise.
SuiteReport run_suite(const std::string& name, const ValidationOptions& opts);
const std::vector<std::string>& suite_names();

Json to_json(const SuiteReport& report);

}  // namespace orifield
