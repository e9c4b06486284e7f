#include <doctest.h>

#include <cmath>
#include <numeric>
#include <tuple>

#include "defocus/error.hpp"
#include "defocus/geometry.hpp"
#include "defocus/sweep.hpp"

using namespace defocus;

namespace {

// Coarse numerics for structural tests where the values themselves do not matter.
EvaluationSettings coarse() {
  EvaluationSettings s;
  s.spectral.lambda_samples = 16;
  s.freq_samples = 32;
  return s;
}

double r_squared(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy * sxy / (sxx * syy);
}

}  // namespace

TEST_CASE("grid sizes and ordering") {
  SweepGrid g;
  g.n_depth = 2;
  SweepOptions collapsed;
  collapsed.collapse_depth = true;
  collapsed.jobs = 4;
  const auto c = run_sweep(g, coarse(), collapsed);
  CHECK(c.size() == 175);
  for (const auto& r : c) CHECK(!r.focus_distance);

  SweepOptions full;
  full.jobs = 4;
  const auto f = run_sweep(g, coarse(), full);
  REQUIRE(f.size() == 1225);
  auto key = [](const SweepRecord& r) {
    return std::make_tuple(*r.focus_distance, r.f_number, r.c_max, r.pixel_pitch);
  };
  for (std::size_t i = 1; i < f.size(); ++i) CHECK(key(f[i - 1]) < key(f[i]));
  for (const auto& r : f) CHECK(r.ok());
}

TEST_CASE("collapsed records equal the reference-depth slice") {
  SweepGrid g = SweepGrid::reduced();
  g.focus_distances = {5.0, 10.0};
  g.n_depth = 3;
  SweepOptions full;
  SweepOptions collapsed;
  collapsed.collapse_depth = true;
  const auto f = run_sweep(g, coarse(), full);
  const auto c = run_sweep(g, coarse(), collapsed);
  REQUIRE(c.size() * 2 == f.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const SweepRecord& slice = f[c.size() + i];
    CHECK(*slice.focus_distance == 10.0);
    CHECK(slice.sigma_max == c[i].sigma_max);
    CHECK(slice.mae_max == c[i].mae_max);
    CHECK(slice.focal_length == c[i].focal_length);
  }
}

TEST_CASE("job count does not change results") {
  SweepGrid g = SweepGrid::reduced();
  g.n_depth = 3;
  SweepOptions one, many;
  many.jobs = 7;
  const auto a = run_sweep(g, coarse(), one);
  const auto b = run_sweep(g, coarse(), many);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].sigma_max == b[i].sigma_max);
    CHECK(a[i].mae_max == b[i].mae_max);
  }
}

TEST_CASE("per-record failures are captured") {
  SweepGrid g;
  g.f_numbers = {2.0};
  g.focus_distances = {10.0};
  g.c_max_values = {1, 7};
  g.pixel_pitches = {2e-6};
  g.n_depth = 3;
  EvaluationSettings s = coarse();
  s.quad.max_nodes = 48;
  const auto r = run_sweep(g, s, {});
  REQUIRE(r.size() == 2);
  CHECK(r[0].ok());
  REQUIRE(!r[1].ok());
  CHECK(std::isnan(r[1].sigma_max));
  CHECK(r[1].error->find("depth index") != std::string::npos);
}

TEST_CASE("record invariants and depth profile") {
  const RecordProfile p = evaluate_profile(10.0, 2.0, 3.0, 5.6e-6, 0.1, 21);
  const SweepRecord& r = p.record;
  REQUIRE(p.samples.size() == 20);
  CHECK(r.sigma_max > 0.0);
  CHECK(r.mae_max >= 0.0);
  CHECK(r.mae_max <= 1.0);
  const double f = r.focal_length, cm = 9.0 * 3.0 * 5.6e-6;
  CHECK(std::abs(f * f + cm * 2.0 * f - cm * 2.0 * 10.0) <= 1e-9 * cm * 20.0);

  // argmax of sigma is the nearest scene point
  std::size_t arg = 0;
  for (std::size_t i = 0; i < p.samples.size(); ++i) {
    if (p.samples[i].sigma > p.samples[arg].sigma) arg = i;
  }
  CHECK(p.samples[arg].depth_offset == doctest::Approx(-1.0));
  CHECK(r.sigma_max == p.samples[arg].sigma);

  std::vector<double> c, ar, sig;
  for (const auto& s : p.samples) {
    c.push_back(std::abs(s.coc_diameter));
    ar.push_back(std::abs(s.wavefront_coefficient));
    sig.push_back(s.sigma);
  }
  CHECK(r_squared(c, sig) > 0.98);
  const double slope = ar.front() / c.front();
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(std::abs(ar[i] - slope * c[i]) <= 1e-12 * ar.front());
}

TEST_CASE("sigma_max is non-decreasing in C_max") {
  SweepGrid g;
  g.f_numbers = {1.4};
  g.focus_distances = {10.0};
  g.pixel_pitches = {4e-6};
  g.n_depth = 5;
  SweepOptions o;
  o.jobs = 4;
  const auto r = run_sweep(g, {}, o);
  for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i].sigma_max >= r[i - 1].sigma_max);
}

TEST_CASE("filter semantics and per-depth stats") {
  auto rec = [](double df, double fn, double c, double p, double f, double s, double m) {
    SweepRecord r;
    r.focus_distance = df;
    r.f_number = fn;
    r.c_max = c;
    r.pixel_pitch = p;
    r.focal_length = f;
    r.sigma_max = s;
    r.mae_max = m;
    return r;
  };
  std::vector<SweepRecord> in{
      rec(1, 1.0, 1, 5.6e-6, 0.007, 1.5, 0.001),  // kept
      rec(1, 2.0, 2, 2e-6, 0.012, 3.0, 0.010),    // kept, MAE on the threshold
      rec(1, 2.0, 1, 8e-6, 0.010, 2.0, 0.002),    // pixel too large
      rec(5, 1.0, 1, 4e-6, 0.120, 2.0, 0.002),    // focal too long
      rec(5, 1.0, 1, 4e-6, 0.050, 1.0, 0.002),    // sigma on the exclusive bound
      rec(5, 1.0, 1, 4e-6, 0.050, 5.0, 0.002),    // sigma on the exclusive bound
      rec(5, 1.4, 3, 5.6e-6, 0.090, 4.9, 0.0101), // MAE too large
      rec(10, 4.0, 3, 5.6e-6, 0.0775, 4.2, 0.003),
  };
  SweepRecord failed = rec(10, 1.0, 1, 1e-6, NAN, NAN, NAN);
  failed.error = "boom";
  in.push_back(failed);

  const FilterResult r = filter_records(in, {});
  REQUIRE(r.records.size() == 3);
  REQUIRE(r.per_depth.size() == 3);
  CHECK(r.per_depth[0].count == 2);
  CHECK(r.per_depth[0].focal_min == doctest::Approx(0.007));
  CHECK(r.per_depth[0].focal_max == doctest::Approx(0.012));
  CHECK(r.per_depth[0].pixel_min == doctest::Approx(2e-6));
  CHECK(r.per_depth[0].f_number_max == 2.0);
  CHECK(r.per_depth[1].count == 0);
  CHECK(std::isnan(r.per_depth[1].focal_min));
  CHECK(r.per_depth[2].count == 1);

  FilterCriteria exact;
  exact.pixel_exact = 5.6e-6;
  CHECK(filter_records(in, exact).records.size() == 2);

  FilterCriteria everything{1.0, 0.0001, 1e9, 1.0, 10.0, std::nullopt};
  CHECK(filter_records(in, everything).records.size() == in.size() - 1);

  FilterCriteria bad;
  bad.sigma_lower = 6.0;
  CHECK_THROWS_AS(filter_records(in, bad), InvalidArgument);
}

TEST_CASE("grid validation") {
  SweepGrid g;
  g.eta = 1.0;
  CHECK_THROWS_AS(g.validate(), InvalidArgument);
  g = SweepGrid{};
  g.pixel_pitches.clear();
  CHECK_THROWS_AS(g.validate(), InvalidArgument);
}

TEST_CASE("doubling the depth samples barely moves the maxima") {
  const SweepRecord a = evaluate_record(10.0, 1.4, 4.0, 4e-6, 0.1, 21);
  const SweepRecord b = evaluate_record(10.0, 1.4, 4.0, 4e-6, 0.1, 41);
  CHECK(std::abs(a.sigma_max - b.sigma_max) <= 0.005 * b.sigma_max);
  CHECK(std::abs(a.mae_max - b.mae_max) <= 0.002);
}
