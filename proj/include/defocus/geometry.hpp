#pragma once

// Thin-lens geometry of a defocused camera: lens law, circle of confusion,
// the depth <-> blur map and the linear link between blur diameter and the
// peak wavefront error at the pupil rim.
//
// All lengths are in metres.

#include <vector>

namespace defocus {

struct CameraConfig {
  double focal_length = 0.0;
  double f_number = 0.0;        // f / A
  double focus_distance = 0.0;  // focused scene depth d_f
  double pixel_pitch = 0.0;

  /// Throws InvalidArgument unless f > 0, f_number >= 1, pixel_pitch > 0 and
  /// focus_distance > focal_length.
  void validate() const;
};

struct DerivedOptics {
  double image_distance = 0.0;       // d_i
  double aperture_diameter = 0.0;    // A
  double in_focus_blur_scale = 0.0;  // C_o = A f / (d_f - f)
  double ar_per_coc = 0.0;           // A_R / C = A / (8 d_i)
};

/// One out-of-focus condition. depth_offset and coc_diameter share their
/// sign; wavefront_coefficient = ar_per_coc * coc_diameter.
struct DefocusState {
  double depth_offset = 0.0;
  double coc_diameter = 0.0;
  double wavefront_coefficient = 0.0;
};

struct DepthGrid {
  double relative_half_range = 0.0;
  int point_count = 0;
  std::vector<double> offsets;
};

DerivedOptics derive_optics(const CameraConfig& config);

/// Scene depth focused by a lens of focal length f onto an image plane at d_i.
double focus_distance_from_image(double focal_length, double image_distance);

/// Blur state of a scene point at d_f + depth_offset.
DefocusState coc_from_depth(const CameraConfig& config, double depth_offset);

/// Inverse of coc_from_depth. Rejects coc_diameter >= C_o, and results with
/// |depth| > depth_cap * d_f (the pole of the map sits at C = C_o).
double depth_from_coc(const CameraConfig& config, double coc_diameter,
                      double depth_cap = 10.0);

/// Largest |C| over depth offsets in [-eta d_f, +eta d_f]; attained at -eta d_f.
double max_coc(const CameraConfig& config, double eta);

/// Positive root of f^2 + C_m f_n f - C_m f_n d_f = 0, C_m = (1-eta)/eta c_max:
/// the focal length whose max_coc over +-eta d_f equals c_max.
double focal_for_cmax(double focus_distance, double f_number, double c_max,
                      double eta);

/// n_points uniform offsets spanning exactly [-eta d_f, +eta d_f].
DepthGrid depth_grid(double focus_distance, double eta, int n_points = 21);

/// Defocus path-length error W = a_r r^2 at normalized pupil radius r.
double defocus_wavefront(double normalized_radius, double a_r);

}  // namespace defocus
