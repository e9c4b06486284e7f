#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace defocus {

/// Settings for the adaptive composite Gauss-Legendre rule used on the
/// oscillatory pupil integrals.
struct QuadratureSpec {
  int base_nodes = 16;              // minimum node count of the first pass
  int nodes_per_oscillation = 16;   // nodes per period of the cosine factor
  double absolute_tolerance = 1e-9;
  int max_nodes = 1 << 16;          // refinement budget

  void validate() const;
};

/// n-point Gauss-Legendre nodes and weights on [-1, 1], ascending.
class GaussLegendre {
 public:
  explicit GaussLegendre(int order);

  int order() const { return static_cast<int>(nodes_.size()); }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }

  /// Composite rule: [a, b] split into `panels` equal panels.
  template <class F>
  double integrate(F&& f, double a, double b, int panels) const {
    const double h = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double mid = a + (p + 0.5) * h;
      const double half = 0.5 * h;
      double s = 0.0;
      for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * f(mid + half * nodes_[i]);
      sum += half * s;
    }
    return sum;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Shared 16-point panel rule.
const GaussLegendre& panel_rule();

struct QuadratureResult {
  double value = 0.0;
  int nodes_used = 0;
};

/// Panel count for the first pass: enough for `base_nodes` and for
/// `nodes_per_oscillation` samples on each of `oscillations` periods.
int initial_panels(const QuadratureSpec& spec, double oscillations);

/// Integrates f over [a, b] with the composite 16-point rule, doubling the
/// panel count until two successive estimates agree to absolute_tolerance.
/// Throws NumericError if the node budget is exhausted.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, const QuadratureSpec& spec,
                                    double oscillations);

}  // namespace defocus

#include "defocus/quadrature_impl.hpp"
