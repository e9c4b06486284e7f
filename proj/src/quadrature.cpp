#include "defocus/quadrature.hpp"

#include <algorithm>
#include <numbers>

#include "defocus/error.hpp"

namespace defocus {

void QuadratureSpec::validate() const {
  if (base_nodes < 16) throw InvalidArgument("base_nodes must be at least 16");
  if (nodes_per_oscillation < 8) throw InvalidArgument("nodes_per_oscillation must be at least 8");
  if (!(absolute_tolerance > 0.0)) throw InvalidArgument("absolute_tolerance must be positive");
  if (max_nodes < 3 * base_nodes) throw InvalidArgument("max_nodes too small for one refinement");
}

GaussLegendre::GaussLegendre(int order) {
  if (order < 1) throw InvalidArgument("Gauss-Legendre order must be positive");
  const auto n = static_cast<std::size_t>(order);
  nodes_.resize(n);
  weights_.resize(n);
  // Newton iteration on P_n from the Chebyshev-like initial guess.
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < order; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
      }
      pp = order * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15) break;
    }
    nodes_[i] = -z;
    nodes_[n - 1 - i] = z;
    weights_[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    weights_[n - 1 - i] = weights_[i];
  }
}

const GaussLegendre& panel_rule() {
  static const GaussLegendre rule(16);
  return rule;
}

int initial_panels(const QuadratureSpec& spec, double oscillations) {
  const int order = panel_rule().order();
  const double wanted =
      std::max(static_cast<double>(spec.base_nodes), spec.nodes_per_oscillation * std::ceil(oscillations));
  return std::max(1, static_cast<int>(std::ceil(wanted / order)));
}

}  // namespace defocus
