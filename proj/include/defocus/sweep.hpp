#pragma once

// Camera-settings sweep: for each (d_f, f_n, C_max, P) solve the focal
// length, scan the +-eta depth range, fit the Gaussian model to every
// polychromatic defocus filter and keep the worst-case sigma and MAE.

#include <optional>
#include <string>
#include <vector>

#include "defocus/quadrature.hpp"
#include "defocus/spectral_otf.hpp"

namespace defocus {

struct SweepGrid {
  std::vector<double> f_numbers{1.0, 1.4, 2.0, 2.8, 4.0};
  std::vector<double> focus_distances{1.0, 5.0, 10.0, 20.0, 40.0, 70.0, 100.0};  // m
  std::vector<double> c_max_values{1, 2, 3, 4, 5, 6, 7};                       // pixels
  std::vector<double> pixel_pitches{1e-6, 2e-6, 4e-6, 5.6e-6, 8e-6};           // m
  double eta = 0.1;
  int n_depth = 21;

  void validate() const;

  /// 3 f-numbers x 3 C_max x 2 pixel pitches, for quick runs.
  static SweepGrid reduced();
};

/// Numerical settings shared by every record of a sweep.
struct EvaluationSettings {
  SpectralModel spectral;
  QuadratureSpec quad;
  int freq_samples = 257;
};

struct SweepRecord {
  std::optional<double> focus_distance;  // absent in the depth-collapsed table
  double f_number = 0.0;
  double c_max = 0.0;        // pixels
  double pixel_pitch = 0.0;  // m
  double focal_length = 0.0; // m
  double sigma_max = 0.0;    // pixels
  double mae_max = 0.0;
  std::optional<std::string> error;

  bool ok() const { return !error.has_value(); }
};

struct DepthSample {
  double depth_offset = 0.0;
  double coc_diameter = 0.0;
  double wavefront_coefficient = 0.0;
  double sigma = 0.0;
  double mae = 0.0;
  double rmse = 0.0;
};

struct RecordProfile {
  SweepRecord record;
  std::vector<DepthSample> samples;  // in-focus offset excluded
};

/// Full per-depth detail behind one record. Throws on numerical failure,
/// naming the offending depth index.
RecordProfile evaluate_profile(double focus_distance, double f_number, double c_max_px,
                               double pixel_pitch, double eta, int n_depth,
                               const EvaluationSettings& settings = {});

SweepRecord evaluate_record(double focus_distance, double f_number, double c_max_px,
                            double pixel_pitch, double eta, int n_depth,
                            const EvaluationSettings& settings = {});

struct SweepOptions {
  bool collapse_depth = false;
  double reference_distance = 10.0;  // m, used when collapse_depth is set
  int jobs = 1;
};

/// Records in lexicographic order of (d_f, f_n, C_max, P), or (f_n, C_max, P)
/// when collapsed. A record whose evaluation fails carries `error` and NaN
/// results; the sweep itself does not abort. Output does not depend on jobs.
std::vector<SweepRecord> run_sweep(const SweepGrid& grid, const EvaluationSettings& settings = {},
                                   const SweepOptions& options = {});

struct FilterCriteria {
  double mae_threshold = 0.01;
  double sigma_lower = 1.0;  // pixels, exclusive
  double sigma_upper = 5.0;  // pixels, exclusive
  double pixel_max = 5.6e-6;
  double focal_max = 0.1;
  std::optional<double> pixel_exact;

  void validate() const;
};

struct DepthStats {
  double focus_distance = 0.0;
  int count = 0;
  double pixel_min = 0.0, pixel_max = 0.0;
  double focal_min = 0.0, focal_max = 0.0;
  double f_number_min = 0.0, f_number_max = 0.0;
};

struct FilterResult {
  std::vector<SweepRecord> records;
  std::vector<DepthStats> per_depth;  // one entry per distinct input d_f, ascending
};

FilterResult filter_records(const std::vector<SweepRecord>& records, const FilterCriteria& criteria);

}  // namespace defocus
