#pragma once

// Gaussian defocus model exp(-sigma^2 u^2 / 2) on the cycles-per-pixel band
// u in [0, 1]; sigma is in pixel units.

#include "defocus/spectral_otf.hpp"

namespace defocus {

struct GaussianFitResult {
  double sigma = 0.0;
  double mae = 0.0;
  double rmse = 0.0;
  double matched_area = 0.0;
};

/// Trapezoid area of the curve over u in [0, 1]. Rejects curves that are not
/// on the cycles-per-pixel axis or do not span [0, 1].
double curve_area(const OtfCurve& curve);

/// Continuous model area int_0^1 exp(-sigma^2 u^2 / 2) du.
double gaussian_area(double sigma);

/// Model area under the same trapezoid rule and grid as `curve`.
double gaussian_area_on_grid(const OtfCurve& curve, double sigma);

/// Equal-area fit: bisection on sigma in [1e-6, 1e3] until the model's
/// trapezoid area on the curve grid equals curve_area(curve) to 1e-10.
/// Throws InvalidArgument when the area lies outside (0, 1].
GaussianFitResult fit_sigma_equal_area(const OtfCurve& curve);

/// Least-squares sigma over the curve grid. Not the default fit; provided
/// for sensitivity comparisons against the equal-area choice.
GaussianFitResult fit_sigma_least_squares(const OtfCurve& curve);

/// Mean of |value_i - exp(-sigma^2 u_i^2 / 2)| over the curve samples.
double mae(const OtfCurve& curve, double sigma);

/// Root mean square of the same deviations.
double rmse(const OtfCurve& curve, double sigma);

}  // namespace defocus
