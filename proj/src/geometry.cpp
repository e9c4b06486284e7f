#include "defocus/geometry.hpp"

#include <cmath>
#include <string>

#include "defocus/error.hpp"

namespace defocus {

void CameraConfig::validate() const {
  if (!(focal_length > 0.0)) throw InvalidArgument("focal length must be positive");
  if (!(f_number >= 1.0)) throw InvalidArgument("f-number must be at least 1");
  if (!(pixel_pitch > 0.0)) throw InvalidArgument("pixel pitch must be positive");
  if (!(focus_distance > focal_length)) {
    throw InvalidArgument("focus distance must exceed the focal length (no real image otherwise)");
  }
}

DerivedOptics derive_optics(const CameraConfig& config) {
  config.validate();
  const double f = config.focal_length;
  const double df = config.focus_distance;
  DerivedOptics d;
  d.image_distance = f * df / (df - f);
  d.aperture_diameter = f / config.f_number;
  d.in_focus_blur_scale = d.aperture_diameter * f / (df - f);
  d.ar_per_coc = d.aperture_diameter / (8.0 * d.image_distance);
  return d;
}

double focus_distance_from_image(double focal_length, double image_distance) {
  if (!(image_distance > focal_length) || !(focal_length > 0.0)) {
    throw InvalidArgument("image distance must exceed a positive focal length");
  }
  return focal_length * image_distance / (image_distance - focal_length);
}

DefocusState coc_from_depth(const CameraConfig& config, double depth_offset) {
  const DerivedOptics d = derive_optics(config);
  const double df = config.focus_distance;
  if (!(df + depth_offset > 0.0)) {
    throw InvalidArgument("scene point must lie in front of the lens (d_f + depth_offset > 0)");
  }
  DefocusState s;
  s.depth_offset = depth_offset;
  s.coc_diameter = depth_offset * d.in_focus_blur_scale / (df + depth_offset);
  s.wavefront_coefficient = d.ar_per_coc * s.coc_diameter;
  return s;
}

double depth_from_coc(const CameraConfig& config, double coc_diameter, double depth_cap) {
  const DerivedOptics d = derive_optics(config);
  const double co = d.in_focus_blur_scale;
  if (!(coc_diameter < co)) {
    throw OutOfRange("blur diameter " + std::to_string(coc_diameter) +
                     " m reaches C_o = " + std::to_string(co) + " m (point at or beyond infinity)");
  }
  const double depth = coc_diameter * config.focus_distance / (co - coc_diameter);
  if (std::abs(depth) > depth_cap * config.focus_distance) {
    throw OutOfRange("depth offset " + std::to_string(depth) + " m exceeds the cap of " +
                     std::to_string(depth_cap) + " x d_f");
  }
  return depth;
}

double max_coc(const CameraConfig& config, double eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw InvalidArgument("eta must lie in (0, 1)");
  const DerivedOptics d = derive_optics(config);
  return eta / (1.0 - eta) * d.in_focus_blur_scale;
}

double focal_for_cmax(double focus_distance, double f_number, double c_max, double eta) {
  if (!(focus_distance > 0.0 && f_number > 0.0 && c_max > 0.0)) {
    throw InvalidArgument("focus distance, f-number and c_max must be positive");
  }
  if (!(eta > 0.0 && eta < 1.0)) throw InvalidArgument("eta must lie in (0, 1)");
  const double cm = (1.0 - eta) / eta * c_max;
  const double q = cm * f_number;
  // q/2 (sqrt(1 + 4 d_f/q) - 1) rewritten to avoid cancellation when q << d_f.
  return 2.0 * focus_distance / (1.0 + std::sqrt(1.0 + 4.0 * focus_distance / q));
}

DepthGrid depth_grid(double focus_distance, double eta, int n_points) {
  if (n_points < 2) throw InvalidArgument("depth grid needs at least 2 points");
  if (!(focus_distance > 0.0)) throw InvalidArgument("focus distance must be positive");
  if (!(eta > 0.0 && eta < 1.0)) throw InvalidArgument("eta must lie in (0, 1)");
  DepthGrid g;
  g.relative_half_range = eta;
  g.point_count = n_points;
  g.offsets.reserve(static_cast<std::size_t>(n_points));
  const double half = eta * focus_distance;
  for (int t = 0; t < n_points; ++t) {
    const int num = 2 * t - n_points + 1;
    g.offsets.push_back(half * static_cast<double>(num) / static_cast<double>(n_points - 1));
  }
  return g;
}

double defocus_wavefront(double normalized_radius, double a_r) {
  if (!(normalized_radius >= 0.0 && normalized_radius <= 1.0)) {
    throw InvalidArgument("normalized pupil radius must lie in [0, 1]");
  }
  return a_r * normalized_radius * normalized_radius;
}

}  // namespace defocus
