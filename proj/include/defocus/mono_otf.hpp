#pragma once

// Single-wavelength transfer functions of a circular pupil with defocus.
//
// Frequencies are normalized to the incoherent cutoff: s = rho / (2 rho_o),
// s in [0, 1], with cos(theta) = s. Defocus severity is A_R / lambda, the
// peak wavefront error at the pupil rim in wavelengths; the functions are
// even in it.

#include <optional>
#include <vector>

#include "defocus/quadrature.hpp"

namespace defocus {

/// Aberration-free OTF (2/pi)(theta - sin(2 theta)/2). Returns 0 beyond the
/// cutoff (s > 1); throws InvalidArgument for s < 0.
double diffraction_otf(double s);

/// Defocused OTF, (4/pi) * int_0^{1-cos t} sqrt(1-(x+cos t)^2) cos(8 pi a x cos t) dx,
/// by adaptive Gauss-Legendre quadrature after x = (1 - cos t)(1 - u^2).
double defocused_otf_exact(double s, double ar_over_lambda, const QuadratureSpec& quad = {});

/// Chord replacement sin(t)(1 - (x / (1 - cos t))^k) of the pupil-overlap arc.
double chord_approx(double x, double theta, double k);

/// Closed form of the defocused OTF with the k = 1 chord:
/// (4/pi) sin^2(t/2) sin(t) sinc^2(8 a cos(t) sin^2(t/2)), sinc(x) = sin(pi x)/(pi x).
double defocused_otf_approx_k1(double s, double ar_over_lambda);

enum class TransferMode { exact, approx };

struct TransferValue {
  double value = 0.0;
  bool is_limit = false;  // s == 1, where the ratio is 0/0 and its limit is reported
};

/// Defocus-only transfer H_def^o / H^o. At s = 1 the ratio is 0/0; the
/// returned value is its limit from below (1 for exact mode, 3/4 for the
/// k = 1 closed form) with is_limit set.
TransferValue defocus_transfer(double s, double ar_over_lambda, const QuadratureSpec& quad = {},
                               TransferMode mode = TransferMode::exact);

/// Chord exponent k(theta) forcing the chord through the arc mid-point
/// (cos(t/2) - cos(t), sin(t/2)). Defined on the open interval (0, pi/2).
double k_of_theta(double theta);

/// k(theta) extended to [0, pi/2] by its limit ln(1/2)/ln(3/4) at theta = 0.
double k_of_theta_closed(double theta);

/// (2/pi) * int_0^{pi/2} k(theta) d theta.
double mean_k(double tolerance = 1e-13);

struct FringeAnalysis {
  std::vector<double> zero_locations;      // ascending s
  std::vector<double> extremum_locations;  // ascending s
  std::optional<double> fringe_period;       // linearized spacing, s units, when a > 2
  std::optional<double> fringe_period_exact; // spacing between the l=1 and l=2 zeros
};

/// Zero crossings (integer l) and extrema (half-integer l) of the sinc^2
/// factor of the k = 1 approximation: s = 1/2 +- sqrt(1/4 - l / (4 a)) for a > l.
FringeAnalysis predict_zero_extrema(double ar_over_lambda);

/// Sign changes of the exact defocused OTF on a uniform s grid, refined by
/// bisection to well below 1e-6.
std::vector<double> find_zeros_numeric(double ar_over_lambda, const QuadratureSpec& quad = {},
                                       int grid_points = 2048);

/// Low-level kernel shared with the polychromatic average: returns
/// H_def^o / H^o for cos(theta) = c in [0, 1) and cosine argument pi * b * x,
/// where b = 8 (A_R / lambda) c.
double transfer_ratio(double c, double b, const QuadratureSpec& quad);

}  // namespace defocus
