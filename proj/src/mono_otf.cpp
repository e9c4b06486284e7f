#include "defocus/mono_otf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "defocus/error.hpp"

namespace defocus {

namespace {

constexpr double kPi = std::numbers::pi;

void check_frequency(double s) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw InvalidArgument("normalized frequency s = " + std::to_string(s) + " outside [0, 1]");
  }
}

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = kPi * x;
  return std::sin(px) / px;
}

// Number of cosine periods across the integration interval.
double oscillation_count(double c, double b) { return std::abs(b) * (1.0 - c) / 2.0; }

// Numerator and denominator of the ratio on a fixed composite rule. The
// common factor 2 e sqrt(e) of the substituted integrand cancels.
struct RatioSums {
  double num;
  double den;
};

RatioSums ratio_sums(double e, double phase, int panels) {
  const GaussLegendre& rule = panel_rule();
  const auto x = rule.nodes();
  const auto w = rule.weights();
  const double h = 1.0 / panels;
  double num = 0.0, den = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double u = mid + 0.5 * h * x[i];
      const double u2 = u * u;
      const double g = w[i] * u2 * std::sqrt(2.0 - e * u2);
      num += g * std::cos(phase * (1.0 - u2));
      den += g;
    }
  }
  return {num, den};
}

}  // namespace

double diffraction_otf(double s) {
  if (!(s >= 0.0)) throw InvalidArgument("normalized frequency must be non-negative");
  if (s >= 1.0) return 0.0;
  const double theta = std::acos(s);
  return 2.0 / kPi * (theta - 0.5 * std::sin(2.0 * theta));
}

double defocused_otf_exact(double s, double ar_over_lambda, const QuadratureSpec& quad) {
  check_frequency(s);
  quad.validate();
  const double c = s;
  const double e = 1.0 - c;
  if (e == 0.0) return 0.0;
  const double b = 8.0 * std::abs(ar_over_lambda) * c;
  const double phase = kPi * b * e;
  const double scale = 4.0 / kPi * 2.0 * e * std::sqrt(e);
  auto integrand = [=](double u) {
    const double u2 = u * u;
    return scale * u2 * std::sqrt(2.0 - e * u2) * std::cos(phase * (1.0 - u2));
  };
  return integrate_adaptive(integrand, 0.0, 1.0, quad, oscillation_count(c, b)).value;
}

double transfer_ratio(double c, double b, const QuadratureSpec& quad) {
  const double e = 1.0 - c;
  const double phase = kPi * b * e;
  if (phase == 0.0) return 1.0;
  const int order = panel_rule().order();
  int panels = initial_panels(quad, oscillation_count(c, b));
  if (3 * panels * order > quad.max_nodes) {
    throw NumericError("transfer quadrature needs more than " + std::to_string(quad.max_nodes) +
                       " nodes");
  }
  RatioSums r = ratio_sums(e, phase, panels);
  double previous = r.num / r.den;
  int used = panels * order;
  for (;;) {
    panels *= 2;
    used += panels * order;
    if (used > quad.max_nodes) {
      throw NumericError("transfer quadrature did not converge within " +
                         std::to_string(quad.max_nodes) + " nodes");
    }
    r = ratio_sums(e, phase, panels);
    const double current = r.num / r.den;
    if (std::abs(current - previous) < quad.absolute_tolerance) return current;
    previous = current;
  }
}

double chord_approx(double x, double theta, double k) {
  if (!(k > 0.0)) throw InvalidArgument("chord exponent k must be positive");
  const double span = 1.0 - std::cos(theta);
  if (!(x >= 0.0 && x <= span)) throw InvalidArgument("x outside [0, 1 - cos(theta)]");
  if (span == 0.0) return std::sin(theta);
  return std::sin(theta) * (1.0 - std::pow(x / span, k));
}

double defocused_otf_approx_k1(double s, double ar_over_lambda) {
  check_frequency(s);
  const double theta = std::acos(s);
  const double half = std::sin(0.5 * theta);
  const double sh2 = half * half;
  const double arg = 8.0 * std::abs(ar_over_lambda) * s * sh2;
  const double sc = sinc(arg);
  return 4.0 / kPi * sh2 * std::sin(theta) * sc * sc;
}

TransferValue defocus_transfer(double s, double ar_over_lambda, const QuadratureSpec& quad,
                               TransferMode mode) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw InvalidArgument("normalized frequency s = " + std::to_string(s) + " outside [0, 1]");
  }
  if (s == 1.0) {
    // theta -> 0: the exact integrand's cosine tends to 1 over a vanishing
    // interval; the k = 1 form tends to 2 (t^3/4) / (2 t^3/3) = 3/4.
    return {mode == TransferMode::exact ? 1.0 : 0.75, true};
  }
  if (mode == TransferMode::exact) {
    quad.validate();
    return {transfer_ratio(s, 8.0 * std::abs(ar_over_lambda) * s, quad), false};
  }
  return {defocused_otf_approx_k1(s, ar_over_lambda) / diffraction_otf(s), false};
}

double k_of_theta(double theta) {
  if (!(theta > 0.0 && theta < kPi / 2.0)) {
    throw InvalidArgument("k(theta) is defined on the open interval (0, pi/2)");
  }
  return k_of_theta_closed(theta);
}

double k_of_theta_closed(double theta) {
  if (!(theta >= 0.0 && theta <= kPi / 2.0)) {
    throw InvalidArgument("theta outside [0, pi/2]");
  }
  if (theta == 0.0) return std::log(0.5) / std::log(0.75);
  // Product forms of sin t - sin(t/2) and cos(t/2) - cos t avoid cancellation
  // for small theta.
  const double q = std::sin(0.25 * theta);
  const double h = std::sin(0.5 * theta);
  const double rise = 2.0 * std::cos(0.75 * theta) * q / std::sin(theta);
  const double run = std::sin(0.75 * theta) * q / (h * h);
  return std::log(rise) / std::log(run);
}

double mean_k(double tolerance) {
  const GaussLegendre& rule = panel_rule();
  const double upper = kPi / 2.0;
  int panels = 1;
  double previous = rule.integrate(k_of_theta_closed, 0.0, upper, panels);
  for (; panels < (1 << 14);) {
    panels *= 2;
    const double current = rule.integrate(k_of_theta_closed, 0.0, upper, panels);
    if (std::abs(current - previous) < tolerance) return current / upper;
    previous = current;
  }
  throw NumericError("mean_k did not converge");
}

FringeAnalysis predict_zero_extrema(double ar_over_lambda) {
  const double a = std::abs(ar_over_lambda);
  FringeAnalysis out;
  std::vector<double> lower_zero, upper_zero, lower_ext, upper_ext;
  for (int twice_l = 2; 0.5 * twice_l < a; ++twice_l) {
    const double l = 0.5 * twice_l;
    const double r = std::sqrt(0.25 - l / (4.0 * a));
    auto& lo = (twice_l % 2 == 0) ? lower_zero : lower_ext;
    auto& hi = (twice_l % 2 == 0) ? upper_zero : upper_ext;
    lo.push_back(0.5 - r);
    hi.push_back(0.5 + r);
  }
  auto merge = [](std::vector<double> lo, const std::vector<double>& hi) {
    lo.insert(lo.end(), hi.begin(), hi.end());
    std::sort(lo.begin(), lo.end());
    return lo;
  };
  out.zero_locations = merge(std::move(lower_zero), upper_zero);
  out.extremum_locations = merge(std::move(lower_ext), upper_ext);
  if (a > 2.0) {
    out.fringe_period = 1.0 / (2.0 * (2.38 * a - 2.88));
    out.fringe_period_exact = std::sqrt(0.25 - 1.0 / (4.0 * a)) - std::sqrt(0.25 - 2.0 / (4.0 * a));
  }
  return out;
}

std::vector<double> find_zeros_numeric(double ar_over_lambda, const QuadratureSpec& quad,
                                       int grid_points) {
  if (grid_points < 3) throw InvalidArgument("root grid needs at least 3 points");
  auto h = [&](double s) { return defocused_otf_exact(s, ar_over_lambda, quad); };
  std::vector<double> roots;
  // The last grid point is the cutoff s = 1, where the OTF vanishes
  // identically; it is never a sign change.
  const int last = grid_points - 1;
  double s_prev = 0.0;
  double h_prev = h(0.0);
  for (int i = 1; i < last; ++i) {
    const double s = static_cast<double>(i) / last;
    const double v = h(s);
    if (v == 0.0) {
      roots.push_back(s);
    } else if ((h_prev < 0.0) != (v < 0.0) && h_prev != 0.0) {
      double lo = s_prev, hi = s, f_lo = h_prev;
      for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = h(mid);
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
          lo = mid;
          f_lo = f_mid;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    s_prev = s;
    h_prev = v;
  }
  return roots;
}

}  // namespace defocus
