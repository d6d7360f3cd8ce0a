#include "orifield/tensor.hpp"

#include <algorithm>
#include <array>

namespace orifield {

namespace {

constexpr int kPanelOrder = 16;

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const Rule& panel_rule() {
  static const Rule rule = [] {
    Rule r;
    gauss_legendre<double>(kPanelOrder, r.nodes, r.weights);
    return r;
  }();
  return rule;
}

// Calls f(theta, weight) for every quadrature node on [0, 2π), in a fixed order.
template <typename F>
void for_each_node(const AnisotropySpec& s, int nodes, F&& f) {
  if (nodes < 64) throw Error(ErrorCode::InvalidArgument, "quadrature needs at least 64 nodes");
  constexpr double two_pi = 2 * std::numbers::pi;

  std::vector<double> edges = breakpoints(s);
  if (edges.empty()) edges.push_back(0.0);
  std::vector<std::array<double, 2>> intervals;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const double a = edges[k];
    const double b = k + 1 < edges.size() ? edges[k + 1] : edges.front() + two_pi;
    if (b - a > 1e-14) intervals.push_back({a, b});
  }

  const int total_panels = std::max<int>(int(intervals.size()), nodes / kPanelOrder);
  const Rule& rule = panel_rule();
  for (const auto& [a, b] : intervals) {
    const int panels = std::max(1, int(std::lround(total_panels * (b - a) / two_pi)));
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
      const double lo = a + p * h;
      for (int q = 0; q < kPanelOrder; ++q) {
        const double theta = lo + 0.5 * h * (rule.nodes[q] + 1.0);
        f(theta, 0.5 * h * rule.weights[q]);
      }
    }
  }
}

}  // namespace

StructureTensord structure_tensor_quadrature(const AnisotropySpec& s, int nodes) {
  // Sequential accumulation in panel order, so results are bit-reproducible.
  StructureTensord J;
  for_each_node(s, nodes, [&](double theta, double w) {
    const double value = w * eval_anisotropy(s, theta);
    const double c = std::cos(theta);
    const double sn = std::sin(theta);
    J.j11 += c * c * value;
    J.j12 += c * sn * value;
    J.j22 += sn * sn * value;
  });
  return J;
}

double anisotropy_mass(const AnisotropySpec& s, int nodes) {
  double mass = 0.0;
  for_each_node(s, nodes, [&](double theta, double w) { mass += w * eval_anisotropy(s, theta); });
  return mass;
}

}  // namespace orifield
