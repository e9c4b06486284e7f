#pragma once

// Polychromatic defocus transfer under black-body illumination.

#include <optional>
#include <vector>

#include "defocus/geometry.hpp"
#include "defocus/quadrature.hpp"

namespace defocus {

/// Physical constants in the rounded form used by the published tables.
namespace planck_constants {
inline constexpr double planck = 6.63e-34;       // J s
inline constexpr double light_speed = 3e8;       // m / s
inline constexpr double boltzmann = 1.38e-23;    // J / K
}  // namespace planck_constants

struct SpectralModel {
  double lambda_min = 200e-9;
  double lambda_max = 2e-6;
  double temperature = 6000.0;  // K
  int lambda_samples = 256;

  void validate() const;
};

enum class FrequencyAxis { normalized_to_cutoff, cycles_per_pixel };

struct CurveContext {
  CameraConfig config;
  DefocusState state;
};

struct OtfCurve {
  FrequencyAxis axis = FrequencyAxis::cycles_per_pixel;
  std::vector<double> frequency;  // strictly increasing
  std::vector<double> value;
  std::optional<CurveContext> context;

  std::size_t size() const { return frequency.size(); }
};

/// Planck spectral energy density 8 pi h c / lambda^5 / (exp(hc / (lambda k T)) - 1),
/// in J / m^4. Returns 0 once the exponent exceeds 700.
double planck_radiance(double lambda, double temperature);

/// Spectrum-weighted average of the exact defocus transfer on
/// u_k = k / (freq_samples - 1) cycles per pixel. Wavelengths whose normalized
/// frequency reaches the cutoff contribute 0 but stay in the normalization.
OtfCurve polychromatic_otf(const CameraConfig& config, const DefocusState& state,
                           const SpectralModel& spectral = {}, int freq_samples = 257,
                           const QuadratureSpec& quad = {});

/// Pointwise absolute value.
OtfCurve mtf(const OtfCurve& curve);

}  // namespace defocus
