#pragma once

#include <cmath>
#include <string>

#include "defocus/error.hpp"

namespace defocus {

template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, const QuadratureSpec& spec,
                                    double oscillations) {
  const GaussLegendre& rule = panel_rule();
  int panels = initial_panels(spec, oscillations);
  if (3 * panels * rule.order() > spec.max_nodes) {
    throw NumericError("quadrature needs more than " + std::to_string(spec.max_nodes) +
                       " nodes for " + std::to_string(oscillations) + " oscillations");
  }
  double previous = rule.integrate(f, a, b, panels);
  int used = panels * rule.order();
  for (;;) {
    panels *= 2;
    const int nodes = panels * rule.order();
    if (used + nodes > spec.max_nodes) {
      throw NumericError("quadrature did not converge within " + std::to_string(spec.max_nodes) +
                         " nodes");
    }
    const double current = rule.integrate(f, a, b, panels);
    used += nodes;
    if (std::abs(current - previous) < spec.absolute_tolerance) return {current, used};
    previous = current;
  }
}

}  // namespace defocus
