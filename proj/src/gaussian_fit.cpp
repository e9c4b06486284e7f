#include "defocus/gaussian_fit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "defocus/error.hpp"

namespace defocus {

namespace {

constexpr double kSigmaLow = 1e-6;
constexpr double kSigmaHigh = 1e3;
constexpr double kAreaTolerance = 1e-10;

void check_band(const OtfCurve& curve) {
  if (curve.axis != FrequencyAxis::cycles_per_pixel) {
    throw InvalidArgument("Gaussian fitting needs a cycles-per-pixel curve");
  }
  if (curve.size() < 2 || curve.value.size() != curve.size()) {
    throw InvalidArgument("curve needs at least two samples with matching values");
  }
  if (std::abs(curve.frequency.front()) > 1e-12 || std::abs(curve.frequency.back() - 1.0) > 1e-12) {
    throw InvalidArgument("curve must span u in [0, 1]");
  }
}

double model(double sigma, double u) { return std::exp(-0.5 * sigma * sigma * u * u); }

GaussianFitResult finish(const OtfCurve& curve, double sigma) {
  GaussianFitResult r;
  r.sigma = sigma;
  r.mae = mae(curve, sigma);
  r.rmse = rmse(curve, sigma);
  r.matched_area = curve_area(curve);
  return r;
}

}  // namespace

double curve_area(const OtfCurve& curve) {
  check_band(curve);
  double area = 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    area += 0.5 * (curve.value[i] + curve.value[i - 1]) * (curve.frequency[i] - curve.frequency[i - 1]);
  }
  return area;
}

double gaussian_area(double sigma) {
  if (sigma == 0.0) return 1.0;
  const double s = std::abs(sigma);
  return std::sqrt(std::numbers::pi / 2.0) / s * std::erf(s / std::numbers::sqrt2);
}

double gaussian_area_on_grid(const OtfCurve& curve, double sigma) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    area += 0.5 * (model(sigma, curve.frequency[i]) + model(sigma, curve.frequency[i - 1])) *
            (curve.frequency[i] - curve.frequency[i - 1]);
  }
  return area;
}

GaussianFitResult fit_sigma_equal_area(const OtfCurve& curve) {
  const double target = curve_area(curve);
  if (!(target > 0.0)) throw InvalidArgument("curve area must be positive for a Gaussian fit");
  if (target > 1.0 + 1e-12) throw InvalidArgument("curve area exceeds 1; no sigma >= 0 matches it");

  double lo = kSigmaLow, hi = kSigmaHigh;
  if (gaussian_area_on_grid(curve, lo) <= target) return finish(curve, lo);
  // Area is strictly decreasing in sigma.
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double diff = gaussian_area_on_grid(curve, mid) - target;
    if (diff > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (std::abs(diff) < kAreaTolerance && hi - lo < 1e-12 * hi) break;
  }
  return finish(curve, 0.5 * (lo + hi));
}

GaussianFitResult fit_sigma_least_squares(const OtfCurve& curve) {
  check_band(curve);
  auto sse = [&](double sigma) {
    double s = 0.0;
    for (std::size_t i = 0; i < curve.size(); ++i) {
      const double d = curve.value[i] - model(sigma, curve.frequency[i]);
      s += d * d;
    }
    return s;
  };
  // Golden-section search in log(sigma), seeded at the equal-area solution
  // bracket [sigma/8, 8 sigma].
  const double seed = fit_sigma_equal_area(curve).sigma;
  double a = std::log(std::max(seed / 8.0, kSigmaLow));
  double b = std::log(std::min(seed * 8.0, kSigmaHigh));
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = sse(std::exp(c)), fd = sse(std::exp(d));
  while (b - a > 1e-12) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = sse(std::exp(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = sse(std::exp(d));
    }
  }
  return finish(curve, std::exp(0.5 * (a + b)));
}

double mae(const OtfCurve& curve, double sigma) {
  check_band(curve);
  double s = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) s += std::abs(curve.value[i] - model(sigma, curve.frequency[i]));
  return s / static_cast<double>(curve.size());
}

double rmse(const OtfCurve& curve, double sigma) {
  check_band(curve);
  double s = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double d = curve.value[i] - model(sigma, curve.frequency[i]);
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(curve.size()));
}

}  // namespace defocus
