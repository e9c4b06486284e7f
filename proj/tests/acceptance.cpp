// Acceptance suite: one PASS/FAIL line per criterion, details indented below.
// Exit status is non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "defocus/cli.hpp"
#include "defocus/gaussian_fit.hpp"
#include "defocus/geometry.hpp"
#include "defocus/mono_otf.hpp"
#include "defocus/spectral_otf.hpp"
#include "defocus/sweep.hpp"
#include "defocus/table_io.hpp"

using namespace defocus;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

int failures = 0;

void verdict(const std::string& id, bool ok, const std::string& text) {
  if (!ok) ++failures;
  std::printf("%s criterion %s: %s\n", ok ? "PASS" : "FAIL", id.c_str(), text.c_str());
  std::fflush(stdout);
}

template <typename... A>
void detail(const char* fmt, A... args) {
  std::printf("    ");
  std::printf(fmt, args...);
  std::printf("\n");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int jobs() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

struct ReferenceRow {
  double f_number, c_max, pixel_um, sigma, mae;
};

// Published collapsed-sweep values for ten rows spread over the grid.
const std::vector<ReferenceRow> kReferenceRows{
    {1.0, 1, 5.6, 1.49, 0.0006}, {1.4, 3, 5.6, 4.46, 0.0094}, {4.0, 7, 8.0, 9.82, 0.0048},
    {1.0, 4, 2.0, 5.66, 0.0231}, {1.4, 6, 1.0, 7.83, 0.0301}, {2.0, 2, 4.0, 2.84, 0.0043},
    {2.0, 5, 8.0, 7.13, 0.0066}, {2.8, 3, 5.6, 4.33, 0.0064}, {2.8, 7, 2.0, 9.17, 0.0158},
    {4.0, 2, 4.0, 2.13, 0.0118},
};

struct FocalRow {
  double d_f, f_number, focal_mm, sigma, mae;
};

// Published P = 5.6 um records: (d_f [m], f_n, f [mm], sigma_max, MAE_max).
const std::vector<FocalRow> kFocalRows{
#include "focal_rows.inc"
};

void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  bool all = true;
  int sigma_ok = 0, mae_ok = 0;
  for (const auto& row : kReferenceRows) {
    const SweepRecord r = evaluate_record(10.0, row.f_number, row.c_max, row.pixel_um * 1e-6, 0.1, 21);
    const double s_tol = std::max(0.05, 0.02 * row.sigma);
    const bool s_pass = std::abs(r.sigma_max - row.sigma) <= s_tol;
    const bool m_pass = std::abs(r.mae_max - row.mae) <= 0.002;
    sigma_ok += s_pass;
    mae_ok += m_pass;
    all = all && s_pass && m_pass;
    detail("f_n=%.1f C_max=%g P=%.1fum: sigma_max %.4f (ref %.2f, tol %.3f) %s | MAE_max %.4f (ref %.4f, tol 0.002) %s",
           row.f_number, row.c_max, row.pixel_um, r.sigma_max, row.sigma, s_tol, s_pass ? "ok" : "off",
           r.mae_max, row.mae, m_pass ? "ok" : "off");
  }
  std::ostringstream msg;
  msg << "collapsed-sweep reference rows at d_f=10 m: sigma within tolerance " << sigma_ok << "/10, MAE within 0.002 "
      << mae_ok << "/10 (" << static_cast<int>(seconds_since(t0)) << " s)";
  verdict("1", all, msg.str());
}

void criterion_2() {
  int ok = 0;
  double worst = 0.0;
  for (const auto& row : kFocalRows) {
    int matches = 0;
    double best = 1e9;
    for (int c = 1; c <= 7; ++c) {
      const double f = focal_for_cmax(row.d_f, row.f_number, c * 5.6e-6, 0.1) * 1e3;
      best = std::min(best, std::abs(f - row.focal_mm));
      if (std::abs(f - row.focal_mm) <= 0.01) ++matches;
    }
    worst = std::max(worst, best);
    if (matches == 1) {
      ++ok;
    } else {
      detail("no unique C_max reproduces d_f=%g f_n=%.1f f=%.2f mm (closest %.4f mm)", row.d_f, row.f_number,
             row.focal_mm, best);
    }
  }
  std::ostringstream msg;
  msg << "focal-length solve reproduces " << ok << "/" << kFocalRows.size()
      << " published P=5.6um focal lengths to 0.01 mm (worst residual " << worst << " mm)";
  verdict("2", ok == static_cast<int>(kFocalRows.size()), msg.str());
}

void criterion_4() {
  const auto t0 = std::chrono::steady_clock::now();
  const double k = mean_k();
  std::ostringstream msg;
  msg.precision(7);
  msg << "mean chord exponent " << k << " vs 2.70428 +- 1e-4 (" << seconds_since(t0) << " s)";
  verdict("4", std::abs(k - 2.70428) <= 1e-4, msg.str());
}

// Minimum of the exact monochrome OTF over s in (0, 1), with its location.
std::pair<double, double> otf_minimum(double a) {
  double best_s = 0.0, best_v = 2.0;
  const int n = 400;
  for (int i = 1; i < n; ++i) {
    const double s = static_cast<double>(i) / n;
    const double v = defocused_otf_exact(s, a);
    if (v < best_v) best_v = v, best_s = s;
  }
  double lo = std::max(0.0, best_s - 1.0 / n), hi = std::min(1.0, best_s + 1.0 / n);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 60; ++it) {
    const double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
    if (defocused_otf_exact(m1, a) < defocused_otf_exact(m2, a)) hi = m2;
    else lo = m1;
  }
  const double s = 0.5 * (lo + hi);
  return {s, defocused_otf_exact(s, a)};
}

void criterion_5() {
  const auto t0 = std::chrono::steady_clock::now();
  double lo = 0.3, hi = 1.0;
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    (otf_minimum(mid).second < 0.0 ? hi : lo) = mid;
  }
  const double first_onset = hi;
  const double first_location = otf_minimum(first_onset).first;

  double lo2 = first_onset + 1e-3, hi2 = 2.0;
  for (int it = 0; it < 30; ++it) {
    const double mid = 0.5 * (lo2 + hi2);
    (find_zeros_numeric(mid, {}, 1024).size() >= 4 ? hi2 : lo2) = mid;
  }
  const double second_onset = hi2;

  const bool a = std::abs(first_onset - 0.64) <= 0.02;
  const bool b = std::abs(second_onset - 1.10) <= 0.05;
  const bool c = std::abs(first_location - 0.50) <= 0.02;
  detail("first zero onset A_R/lambda = %.4f (ref 0.64 +- 0.02) %s", first_onset, a ? "ok" : "off");
  detail("second zero pair onset A_R/lambda = %.4f (ref 1.10 +- 0.05) %s", second_onset, b ? "ok" : "off");
  detail("first zero location at onset s = %.4f (ref 0.50 +- 0.02) %s", first_location, c ? "ok" : "off");
  std::ostringstream msg;
  msg << "monochrome zero-crossing thresholds (" << static_cast<int>(seconds_since(t0)) << " s)";
  verdict("5", a && b && c, msg.str());
}

double brute_force_otf(double s, double a) {
  const int n = 1000000;
  const double h = (1.0 - s) / n;
  long double sum = 0.0L;
  for (int i = 0; i < n; ++i) {
    const double x = (i + 0.5) * h;
    const double y = x + s;
    sum += std::sqrt(1.0 - y * y) * std::cos(kPi * 8.0 * a * s * x);
  }
  return 4.0 / kPi * static_cast<double>(sum) * h;
}

double r_squared(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i] / n, my += y[i] / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy * sxy / (sxx * syy);
}

void criterion_6_fast() {
  {
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const double s = i / 49.0;
      worst = std::max(worst, std::abs(defocused_otf_exact(s, 0.0) - diffraction_otf(s)));
    }
    verdict("6a", worst <= 1e-8, "in-focus OTF vs aberration-free OTF on 50 points, max error " + std::to_string(worst));
  }
  {
    double worst = 0.0;
    for (double a : {0.25, 0.64, 1.5, 3.0, 6.0}) {
      for (double s : {0.05, 0.3, 0.5, 0.7, 0.95}) {
        worst = std::max(worst, std::abs(defocused_otf_exact(s, a) - brute_force_otf(s, a)));
      }
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "quadrature vs 1e6-node midpoint on 5x5 (severity, s), max error %.2e", worst);
    verdict("6b", worst <= 1e-8, buf);
  }
  {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> v(0.0, 1.0), sg(0.0, 10.0);
    int violations = 0;
    for (int t = 0; t < 1000; ++t) {
      OtfCurve c;
      for (int i = 0; i < 257; ++i) {
        c.frequency.push_back(i / 256.0);
        c.value.push_back(v(rng));
      }
      const double s = sg(rng);
      if (mae(c, s) > rmse(c, s)) ++violations;
    }
    verdict("6c", violations == 0, "MAE <= RMSE on 1000 random curves, violations " + std::to_string(violations));
  }
  {
    double worst = 0.0;
    for (double s0 : {0.5, 1.0, 3.0, 8.0}) {
      OtfCurve c;
      for (int i = 0; i < 257; ++i) {
        const double u = i / 256.0;
        c.frequency.push_back(u);
        c.value.push_back(std::exp(-0.5 * s0 * s0 * u * u));
      }
      worst = std::max(worst, std::abs(fit_sigma_equal_area(c).sigma - s0));
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "equal-area self-fit of sigma0 in {0.5,1,3,8}, max error %.2e", worst);
    verdict("6d", worst <= 1e-5, buf);
  }
  {
    double worst = 0.0;
    int curves = 0;
    for (const auto& row : kReferenceRows) {
      for (double d_f : {1.0, 10.0, 100.0}) {
        const double f = focal_for_cmax(d_f, row.f_number, row.c_max * row.pixel_um * 1e-6, 0.1);
        const CameraConfig cfg{f, row.f_number, d_f, row.pixel_um * 1e-6};
        for (double rel : {-0.1, -0.03, 0.05, 0.1}) {
          const OtfCurve c = polychromatic_otf(cfg, coc_from_depth(cfg, rel * d_f));
          worst = std::max(worst, std::abs(c.value.front() - 1.0));
          ++curves;
        }
      }
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "DC normalization of %d polychromatic curves, max |H(0)-1| %.2e", curves, worst);
    verdict("6e", worst <= 1e-6, buf);
  }
  {
    double worst = 0.0;
    for (double a : {3.0, 5.0, 10.0}) {
      const auto numeric = find_zeros_numeric(a);
      for (double p : predict_zero_extrema(a).zero_locations) {
        double best = 1.0;
        for (double r : numeric) best = std::min(best, std::abs(r - p));
        worst = std::max(worst, best);
      }
    }
    verdict("6f", worst <= 0.05, "predicted vs numeric zeros for A_R/lambda in {3,5,10}, max gap " + std::to_string(worst));
  }
  {
    auto linearity = [](const RecordProfile& p, double& r2, double& lin) {
      std::vector<double> c, sig;
      const auto& first = p.samples.front();
      const double slope = first.wavefront_coefficient / first.coc_diameter;
      lin = 0.0;
      for (const auto& s : p.samples) {
        c.push_back(std::abs(s.coc_diameter));
        sig.push_back(s.sigma);
        lin = std::max(lin, std::abs(s.wavefront_coefficient - slope * s.coc_diameter) /
                                std::abs(first.wavefront_coefficient));
      }
      r2 = r_squared(c, sig);
    };
    // The two illustrated cameras: (d_f, f_n, f) = (1 m, 1.4, 15 mm) and (10 m, 1.4, 25 mm), P = 5.6 um.
    double worst_r2 = 1.0, worst_lin = 0.0;
    for (auto [d_f, f] : {std::pair{1.0, 15e-3}, std::pair{10.0, 25e-3}}) {
      const CameraConfig cfg{f, 1.4, d_f, 5.6e-6};
      const double c_max_px = max_coc(cfg, 0.1) / cfg.pixel_pitch;
      const RecordProfile p = evaluate_profile(d_f, 1.4, c_max_px, cfg.pixel_pitch, 0.1, 21);
      double r2 = 0.0, lin = 0.0;
      linearity(p, r2, lin);
      detail("d_f=%g m f=%.2f mm (C_max %.3f px): R^2 %.5f, sigma_max %.3f", d_f, p.record.focal_length * 1e3,
             c_max_px, r2, p.record.sigma_max);
      worst_r2 = std::min(worst_r2, r2);
      worst_lin = std::max(worst_lin, lin);
    }
    double grid_r2 = 1.0;
    for (const auto& row : kReferenceRows) {
      double r2 = 0.0, lin = 0.0;
      linearity(evaluate_profile(10.0, row.f_number, row.c_max, row.pixel_um * 1e-6, 0.1, 21), r2, lin);
      if (r2 <= 0.98) detail("R^2 %.5f at or below 0.98 for f_n=%.1f C_max=%g P=%.1fum", r2, row.f_number, row.c_max, row.pixel_um);
      grid_r2 = std::min(grid_r2, r2);
      worst_lin = std::max(worst_lin, lin);
    }
    detail("min R^2 over the 10 reference records: %.5f", grid_r2);
    char buf[160];
    std::snprintf(buf, sizeof buf, "sigma vs |C| linearity on the two illustrated cameras, min R^2 %.5f; A_R vs C max relative deviation %.1e",
                  worst_r2, worst_lin);
    verdict("6g", worst_r2 > 0.98 && worst_lin <= 1e-12, buf);
  }
}

void criterion_6h(const std::vector<SweepRecord>& full) {
  std::map<std::tuple<double, double, double>, std::vector<const SweepRecord*>> groups;
  for (const auto& r : full) groups[{r.f_number, r.c_max, r.pixel_pitch}].push_back(&r);
  double worst_sigma = 0.0, worst_mae = 0.0;
  for (const auto& [key, recs] : groups) {
    double smin = 1e9, smax = 0, mmin = 1e9, mmax = 0;
    for (const auto* r : recs) {
      smin = std::min(smin, r->sigma_max);
      smax = std::max(smax, r->sigma_max);
      mmin = std::min(mmin, r->mae_max);
      mmax = std::max(mmax, r->mae_max);
    }
    worst_sigma = std::max(worst_sigma, (smax - smin) / smax);
    worst_mae = std::max(worst_mae, mmax - mmin);
  }
  detail("largest MAE_max spread across d_f: %.5f (invariant bound 0.002)", worst_mae);
  char buf[128];
  std::snprintf(buf, sizeof buf, "depth-collapse: largest relative sigma_max spread across d_f %.4f%% over %zu triples",
                100 * worst_sigma, groups.size());
  verdict("6h", worst_sigma < 0.02, buf);
}

std::vector<SweepRecord> criterion_3(const fs::path& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  SweepOptions o;
  o.jobs = jobs();
  const auto full = run_sweep(SweepGrid{}, {}, o);
  const double wall = seconds_since(t0);
  write_records_file(out_dir / "full_sweep.csv", full, TableFormat::csv, TableSchema::full);

  std::size_t failed = 0;
  for (const auto& r : full) failed += !r.ok();
  const FilterResult base = filter_records(full, {});
  FilterCriteria exact;
  exact.pixel_exact = 5.6e-6;
  const FilterResult p56 = filter_records(full, exact);
  write_depth_stats_file(out_dir / "full_sweep_stats.csv", base.per_depth, TableFormat::csv);

  const std::vector<int> expected{28, 28, 28, 27, 22, 15, 9};
  bool depth_ok = base.per_depth.size() == expected.size();
  std::string counts;
  for (std::size_t i = 0; i < base.per_depth.size(); ++i) {
    const auto& s = base.per_depth[i];
    if (i < expected.size()) depth_ok = depth_ok && std::abs(s.count - expected[i]) <= 2;
    counts += (i ? "," : "") + std::to_string(s.count);
    detail("d_f=%3g m: count %2d (ref %2d), f %.2f-%.2f mm, P %.1f-%.1f um, f_n %.1f-%.1f", s.focus_distance, s.count,
           i < expected.size() ? expected[i] : -1, s.focal_min * 1e3, s.focal_max * 1e3, s.pixel_min * 1e6,
           s.pixel_max * 1e6, s.f_number_min, s.f_number_max);
  }
  const bool total_ok = std::abs(static_cast<int>(base.records.size()) - 157) <= 8;
  const bool exact_ok = std::abs(static_cast<int>(p56.records.size()) - 77) <= 4;
  detail("records %zu (failed %zu), wall %.0f s on %d thread(s)", full.size(), failed, wall, o.jobs);
  detail("default filter: %zu records (ref 157 +- 8) %s", base.records.size(), total_ok ? "ok" : "off");
  detail("per-depth counts (%s) vs (28,28,28,27,22,15,9) +- 2 %s", counts.c_str(), depth_ok ? "ok" : "off");
  detail("P = 5.6 um exactly: %zu records (ref 77 +- 4) %s", p56.records.size(), exact_ok ? "ok" : "off");
  verdict("3", full.size() == 1225 && failed == 0 && total_ok && depth_ok && exact_ok,
          "full 1225-record sweep filter counts");
  return full;
}

void criterion_7(const fs::path& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  auto sweep = [&](const std::string& name, int j, bool full) {
    const fs::path p = out_dir / name;
    std::ostringstream out, err;
    std::vector<std::string> args{"sweep", "--reduced", "--jobs", std::to_string(j), "--out", p.string()};
    if (full) {
      args.push_back("--full");
      args.push_back("--df");
      args.push_back("1m,100m");
    }
    const int code = run_cli(args, out, err);
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return std::make_pair(code, ss.str());
  };
  const auto a = sweep("det_a.csv", 1, false);
  const double reduced_wall = seconds_since(t0);
  const auto b = sweep("det_b.csv", 1, false);
  const auto c = sweep("det_c.csv", 4, false);
  const auto d = sweep("det_d.csv", 8, false);
  const auto e = sweep("det_e.csv", 1, true);
  const auto f = sweep("det_f.csv", 6, true);
  const bool codes = a.first == 0 && b.first == 0 && c.first == 0 && d.first == 0 && e.first == 0 && f.first == 0;
  const bool same = !a.second.empty() && a.second == b.second && a.second == c.second && a.second == d.second &&
                    !e.second.empty() && e.second == f.second;
  detail("reduced 3x3x2 collapsed sweep: %.1f s single-threaded", reduced_wall);
  verdict("7", codes && same, "repeated sweep runs with 1, 4, 6 and 8 jobs produce byte-identical files");
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path out_dir = argc > 1 ? fs::path(argv[1]) : fs::current_path() / "acceptance_output";
  fs::create_directories(out_dir);
  const auto t0 = std::chrono::steady_clock::now();

  criterion_1();
  criterion_2();
  criterion_4();
  criterion_5();
  criterion_6_fast();
  criterion_7(out_dir);
  const auto full = criterion_3(out_dir);
  criterion_6h(full);

  std::printf("%s: %d failing criteria, %.0f s total\n", failures ? "FAILED" : "ALL PASSED", failures,
              seconds_since(t0));
  return failures ? 1 : 0;
}
