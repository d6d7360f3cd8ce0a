// One line per acceptance criterion; exit status 1 if any criterion fails.
// Usage: acceptance [seeds]

#include <cstdio>
#include <cstdlib>
#include <functional>

#include "orifield/validation.hpp"

using namespace orifield;

namespace {

struct Criterion {
  int id;
  const char* title;
  std::vector<std::function<SuiteReport(const ValidationOptions&)>> groups;
};

}  // namespace

int main(int argc, char** argv) {
  ValidationOptions opts;
  opts.seeds = argc > 1 ? std::atoi(argv[1]) : 10;
  opts.threads = 1;

  const std::vector<Criterion> criteria = {
      {1, "closed-form tensors", {closed_form_checks}},
      {2, "linear deformations", {deformation_checks}},
      {3, "wavelet frame and Riesz transform", {frame_checks, riesz_checks}},
      {4, "conformal prescription", {conformal_checks}},
      {5, "Monte-Carlo recovery", {montecarlo_checks}},
      {6, "determinism", {determinism_checks}},
  };

  bool all = true;
  for (const Criterion& c : criteria) {
    SuiteReport report{c.title, {}, 0};
    for (const auto& group : c.groups) report.append(group(opts));
    const bool pass = report.passed();
    all = all && pass;
    int failed = 0;
    for (const CheckResult& r : report.checks) failed += !r.pass;
    std::printf("criterion %d %-36s %s  (%zu checks, %d failed, %.2f s)\n", c.id, c.title,
                pass ? "PASS" : "FAIL", report.checks.size(), failed, report.seconds);
    for (const CheckResult& r : report.checks)
      if (!r.pass)
        std::printf("    failed: %s: %.6g > %.6g %s\n", r.name.c_str(), r.value, r.tolerance,
                    r.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
