#include "defocus/spectral_otf.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "defocus/error.hpp"
#include "defocus/mono_otf.hpp"

namespace defocus {

void SpectralModel::validate() const {
  if (!(lambda_min > 0.0 && lambda_min < lambda_max)) {
    throw InvalidArgument("spectral band needs 0 < lambda_min < lambda_max");
  }
  if (!(temperature > 0.0)) throw InvalidArgument("temperature must be positive");
  if (lambda_samples < 16) throw InvalidArgument("lambda_samples must be at least 16");
}

double planck_radiance(double lambda, double temperature) {
  if (!(lambda > 0.0 && temperature > 0.0)) {
    throw InvalidArgument("wavelength and temperature must be positive");
  }
  using namespace planck_constants;
  const double x = planck * light_speed / (lambda * boltzmann * temperature);
  if (x > 700.0) return 0.0;
  const double l2 = lambda * lambda;
  return 8.0 * std::numbers::pi * planck * light_speed / (l2 * l2 * lambda) / std::expm1(x);
}

OtfCurve polychromatic_otf(const CameraConfig& config, const DefocusState& state,
                           const SpectralModel& spectral, int freq_samples,
                           const QuadratureSpec& quad) {
  spectral.validate();
  quad.validate();
  if (freq_samples < 32) throw InvalidArgument("freq_samples must be at least 32");
  const DerivedOptics optics = derive_optics(config);

  const auto nl = static_cast<std::size_t>(spectral.lambda_samples);
  std::vector<double> lambda(nl), weight(nl);
  const double dl = (spectral.lambda_max - spectral.lambda_min) / static_cast<double>(nl - 1);
  double total = 0.0;
  for (std::size_t j = 0; j < nl; ++j) {
    lambda[j] = spectral.lambda_min + static_cast<double>(j) * dl;
    const double trap = (j == 0 || j + 1 == nl) ? 0.5 : 1.0;
    weight[j] = trap * planck_radiance(lambda[j], spectral.temperature);
    total += weight[j];
  }
  if (!(total > 0.0)) throw NumericError("spectral weight vanishes over the band");

  // s = rho lambda d_i / A with rho = u / P; the cosine argument
  // 8 (A_R/lambda) s = u |A_R| 8 d_i / (A P) does not depend on lambda.
  const double working_f_number = optics.image_distance / optics.aperture_diameter;
  const double ar = std::abs(state.wavefront_coefficient);

  OtfCurve curve;
  curve.axis = FrequencyAxis::cycles_per_pixel;
  curve.context = CurveContext{config, state};
  const auto nu = static_cast<std::size_t>(freq_samples);
  curve.frequency.resize(nu);
  curve.value.resize(nu);
  for (std::size_t k = 0; k < nu; ++k) {
    const double u = static_cast<double>(k) / static_cast<double>(nu - 1);
    curve.frequency[k] = u;
    const double rho = u / config.pixel_pitch;
    const double b = 8.0 * rho * ar * working_f_number;
    double acc = 0.0;
    for (std::size_t j = 0; j < nl; ++j) {
      const double s = rho * lambda[j] * working_f_number;
      if (s >= 1.0) continue;
      try {
        acc += weight[j] * transfer_ratio(s, b, quad);
      } catch (const NumericError& e) {
        throw NumericError(std::string(e.what()) + " at u = " + std::to_string(u) +
                           " cycles/pixel, lambda = " + std::to_string(lambda[j]) + " m");
      }
    }
    curve.value[k] = acc / total;
  }
  return curve;
}

OtfCurve mtf(const OtfCurve& curve) {
  OtfCurve out = curve;
  for (double& v : out.value) v = std::abs(v);
  return out;
}

}  // namespace defocus
