#include "defocus/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include "defocus/error.hpp"
#include "defocus/gaussian_fit.hpp"
#include "defocus/geometry.hpp"

namespace defocus {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

bool within(double value, double limit) { return value <= limit * (1.0 + 1e-9); }

}  // namespace

void SweepGrid::validate() const {
  if (f_numbers.empty() || focus_distances.empty() || c_max_values.empty() || pixel_pitches.empty()) {
    throw InvalidArgument("sweep grid lists must be non-empty");
  }
  if (!(eta > 0.0 && eta < 1.0)) throw InvalidArgument("eta must lie in (0, 1)");
  if (n_depth < 2) throw InvalidArgument("n_depth must be at least 2");
  auto positive = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0; });
  };
  if (!positive(focus_distances) || !positive(c_max_values) || !positive(pixel_pitches)) {
    throw InvalidArgument("sweep grid values must be positive");
  }
  if (!std::all_of(f_numbers.begin(), f_numbers.end(), [](double x) { return x >= 1.0; })) {
    throw InvalidArgument("f-numbers must be at least 1");
  }
}

SweepGrid SweepGrid::reduced() {
  SweepGrid g;
  g.f_numbers = {1.0, 2.0, 4.0};
  g.c_max_values = {1, 3, 5};
  g.pixel_pitches = {2e-6, 5.6e-6};
  return g;
}

RecordProfile evaluate_profile(double focus_distance, double f_number, double c_max_px,
                               double pixel_pitch, double eta, int n_depth,
                               const EvaluationSettings& settings) {
  RecordProfile out;
  SweepRecord& rec = out.record;
  rec.focus_distance = focus_distance;
  rec.f_number = f_number;
  rec.c_max = c_max_px;
  rec.pixel_pitch = pixel_pitch;
  rec.focal_length = focal_for_cmax(focus_distance, f_number, c_max_px * pixel_pitch, eta);

  CameraConfig config{rec.focal_length, f_number, focus_distance, pixel_pitch};
  const DepthGrid grid = depth_grid(focus_distance, eta, n_depth);
  for (std::size_t t = 0; t < grid.offsets.size(); ++t) {
    const double offset = grid.offsets[t];
    if (offset == 0.0) continue;
    try {
      const DefocusState state = coc_from_depth(config, offset);
      const OtfCurve filter =
          mtf(polychromatic_otf(config, state, settings.spectral, settings.freq_samples, settings.quad));
      const GaussianFitResult fit = fit_sigma_equal_area(filter);
      out.samples.push_back(
          {offset, state.coc_diameter, state.wavefront_coefficient, fit.sigma, fit.mae, fit.rmse});
      rec.sigma_max = std::max(rec.sigma_max, fit.sigma);
      rec.mae_max = std::max(rec.mae_max, fit.mae);
    } catch (const std::exception& e) {
      throw NumericError(std::string(e.what()) + " (depth index " + std::to_string(t) + ")");
    }
  }
  return out;
}

SweepRecord evaluate_record(double focus_distance, double f_number, double c_max_px,
                            double pixel_pitch, double eta, int n_depth,
                            const EvaluationSettings& settings) {
  return evaluate_profile(focus_distance, f_number, c_max_px, pixel_pitch, eta, n_depth, settings)
      .record;
}

std::vector<SweepRecord> run_sweep(const SweepGrid& grid, const EvaluationSettings& settings,
                                   const SweepOptions& options) {
  grid.validate();
  settings.spectral.validate();
  settings.quad.validate();

  struct Task {
    double d_f, f_n, c_max, pixel;
  };
  std::vector<Task> tasks;
  const std::vector<double> depths =
      options.collapse_depth ? std::vector<double>{options.reference_distance} : sorted(grid.focus_distances);
  for (double d_f : depths) {
    for (double f_n : sorted(grid.f_numbers)) {
      for (double c : sorted(grid.c_max_values)) {
        for (double p : sorted(grid.pixel_pitches)) tasks.push_back({d_f, f_n, c, p});
      }
    }
  }

  std::vector<SweepRecord> records(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& t = tasks[i];
      SweepRecord& r = records[i];
      try {
        r = evaluate_record(t.d_f, t.f_n, t.c_max, t.pixel, grid.eta, grid.n_depth, settings);
      } catch (const std::exception& e) {
        r = SweepRecord{};
        r.f_number = t.f_n;
        r.c_max = t.c_max;
        r.pixel_pitch = t.pixel;
        r.focal_length = kNaN;
        r.sigma_max = kNaN;
        r.mae_max = kNaN;
        r.error = e.what();
      }
      r.focus_distance = options.collapse_depth ? std::nullopt : std::optional<double>(t.d_f);
    }
  };

  const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(tasks.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  return records;
}

void FilterCriteria::validate() const {
  if (!(sigma_lower < sigma_upper)) throw InvalidArgument("sigma_lower must be below sigma_upper");
  if (!(mae_threshold > 0.0 && sigma_lower > 0.0 && pixel_max > 0.0 && focal_max > 0.0)) {
    throw InvalidArgument("filter thresholds must be positive");
  }
}

FilterResult filter_records(const std::vector<SweepRecord>& records, const FilterCriteria& criteria) {
  criteria.validate();
  FilterResult out;
  std::map<double, DepthStats> stats;
  for (const SweepRecord& r : records) {
    if (r.focus_distance) stats.try_emplace(*r.focus_distance, DepthStats{*r.focus_distance});
    if (!r.ok()) continue;
    const bool keep = r.mae_max <= criteria.mae_threshold && criteria.sigma_lower < r.sigma_max &&
                      r.sigma_max < criteria.sigma_upper && within(r.pixel_pitch, criteria.pixel_max) &&
                      within(r.focal_length, criteria.focal_max) &&
                      (!criteria.pixel_exact ||
                       std::abs(r.pixel_pitch - *criteria.pixel_exact) <= 1e-9 * *criteria.pixel_exact);
    if (!keep) continue;
    out.records.push_back(r);
    if (!r.focus_distance) continue;
    DepthStats& s = stats[*r.focus_distance];
    if (s.count == 0) {
      s.pixel_min = s.pixel_max = r.pixel_pitch;
      s.focal_min = s.focal_max = r.focal_length;
      s.f_number_min = s.f_number_max = r.f_number;
    } else {
      s.pixel_min = std::min(s.pixel_min, r.pixel_pitch);
      s.pixel_max = std::max(s.pixel_max, r.pixel_pitch);
      s.focal_min = std::min(s.focal_min, r.focal_length);
      s.focal_max = std::max(s.focal_max, r.focal_length);
      s.f_number_min = std::min(s.f_number_min, r.f_number);
      s.f_number_max = std::max(s.f_number_max, r.f_number);
    }
    ++s.count;
  }
  for (auto& [d, s] : stats) {
    if (s.count == 0) {
      s.pixel_min = s.pixel_max = s.focal_min = s.focal_max = s.f_number_min = s.f_number_max = kNaN;
    }
    out.per_depth.push_back(s);
  }
  return out;
}

}  // namespace defocus
