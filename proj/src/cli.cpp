#include "defocus/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "defocus/error.hpp"
#include "defocus/gaussian_fit.hpp"
#include "defocus/geometry.hpp"
#include "defocus/mono_otf.hpp"
#include "defocus/spectral_otf.hpp"
#include "defocus/svg_plot.hpp"
#include "defocus/sweep.hpp"
#include "defocus/table_io.hpp"
#include "defocus/units.hpp"

namespace defocus {

namespace {

namespace fs = std::filesystem;

struct NumericOptions {
  std::string lambda_min = "200nm";
  std::string lambda_max = "2um";
  std::string temperature = "6000K";
  int lambda_samples = 256;
  int freq_samples = 257;
  QuadratureSpec quad;

  SpectralModel spectral() const {
    SpectralModel m;
    m.lambda_min = parse_length(lambda_min);
    m.lambda_max = parse_length(lambda_max);
    m.temperature = parse_temperature(temperature);
    m.lambda_samples = lambda_samples;
    m.validate();
    return m;
  }

  EvaluationSettings settings() const {
    quad.validate();
    if (freq_samples < 32) throw InvalidArgument("--freq-samples must be at least 32");
    return {spectral(), quad, freq_samples};
  }
};

struct MonoOptions {
  double ar_over_lambda = 0.0;
  int samples = 101;
  std::string mode = "exact";
  std::string out;
};

struct SpectralOptions {
  std::string focal, focus, pixel;
  double f_number = 0.0;
  std::optional<double> coc_px, ar_px;
  std::optional<std::string> depth_offset;
  std::string out, sidecar;
};

struct SweepCliOptions {
  bool full = false;
  bool collapsed = false;
  bool reduced = false;
  std::vector<double> f_numbers;
  std::vector<std::string> focus_distances;
  std::vector<double> c_max_values;
  std::vector<std::string> pixel_pitches;
  std::optional<double> eta;
  std::optional<int> n_depth;
  std::string reference = "10m";
  int jobs = 0;
  std::string format;
  std::string out;
};

struct FilterCliOptions {
  std::string in, out, stats;
  double mae_max = 0.01;
  double sigma_min = 1.0;
  double sigma_max = 5.0;
  std::string pixel_max = "5.6um";
  std::string focal_max = "100mm";
  std::optional<std::string> pixel_exact;
  std::string format;
};

struct PlotOptions {
  std::string in, out;
  std::string x_column;
  std::vector<std::string> y_columns;
  std::string title, x_label, y_label;
};

std::string fmt(double v, const char* spec = "%.8f") {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// Writes through a temporary buffer so that nothing reaches the path unless
// the whole document was produced.
void emit(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty() || path == "-") {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  f.flush();
  if (!f) throw IoError("write failed for '" + path + "'");
}

TableFormat pick_format(const std::string& requested, const std::string& path) {
  if (requested == "csv") return TableFormat::csv;
  if (requested == "json") return TableFormat::json;
  if (!requested.empty()) throw InvalidArgument("--format must be csv or json");
  return path.empty() ? TableFormat::csv : format_for_path(path);
}

void reject_same_file(const std::string& in, const std::string& out) {
  if (in.empty() || out.empty() || out == "-") return;
  std::error_code ec;
  if (fs::exists(out, ec) && fs::equivalent(in, out, ec)) {
    throw InvalidArgument("output '" + out + "' would overwrite the input table");
  }
}

int cmd_otf_mono(const MonoOptions& o, const NumericOptions& num, std::ostream& out, std::ostream& err) {
  if (o.ar_over_lambda < 0.0) throw InvalidArgument("--ar-over-lambda must be non-negative");
  if (o.samples < 2) throw InvalidArgument("--samples must be at least 2");
  const TransferMode mode = o.mode == "approx" ? TransferMode::approx : TransferMode::exact;
  num.quad.validate();

  std::ostringstream csv;
  csv << "s,h_def_o,h_o,h_transfer,h_approx\n";
  bool limit_row = false;
  for (int i = 0; i < o.samples; ++i) {
    const double s = static_cast<double>(i) / (o.samples - 1);
    const TransferValue t = defocus_transfer(s, o.ar_over_lambda, num.quad, mode);
    const TransferValue a = defocus_transfer(s, o.ar_over_lambda, num.quad, TransferMode::approx);
    limit_row = limit_row || t.is_limit;
    csv << fmt(s) << ',' << fmt(defocused_otf_exact(s, o.ar_over_lambda, num.quad)) << ','
        << fmt(diffraction_otf(s)) << ',' << fmt(t.value) << ',' << fmt(a.value) << '\n';
  }
  emit(o.out, csv.str(), out);
  if (limit_row) err << "note: the s = 1 row reports the limit of the transfer ratio (0/0 at cutoff)\n";
  return exit_ok;
}

int cmd_otf_spectral(const SpectralOptions& o, const NumericOptions& num, std::ostream& out) {
  const int chosen = int(o.coc_px.has_value()) + int(o.ar_px.has_value()) + int(o.depth_offset.has_value());
  if (chosen != 1) throw InvalidArgument("give exactly one of --coc-px, --depth-offset, --ar-px");
  const EvaluationSettings settings = num.settings();

  CameraConfig config{parse_length(o.focal), o.f_number, parse_length(o.focus), parse_length(o.pixel)};
  config.validate();
  const DerivedOptics optics = derive_optics(config);

  DefocusState state;
  if (o.depth_offset) {
    state = coc_from_depth(config, parse_length(*o.depth_offset));
  } else {
    const double c = o.coc_px ? *o.coc_px * config.pixel_pitch
                              : *o.ar_px * config.pixel_pitch / optics.ar_per_coc;
    state.coc_diameter = c;
    state.wavefront_coefficient = optics.ar_per_coc * c;
    state.depth_offset = c == 0.0 ? 0.0 : depth_from_coc(config, c);
  }

  const OtfCurve curve =
      polychromatic_otf(config, state, settings.spectral, settings.freq_samples, settings.quad);
  const OtfCurve filter = mtf(curve);
  const GaussianFitResult fit = fit_sigma_equal_area(filter);

  std::ostringstream csv;
  csv << "u_cpp,h_def,mtf,gauss_fit\n";
  for (std::size_t k = 0; k < curve.size(); ++k) {
    const double u = curve.frequency[k];
    csv << fmt(u) << ',' << fmt(curve.value[k]) << ',' << fmt(filter.value[k]) << ','
        << fmt(std::exp(-0.5 * fit.sigma * fit.sigma * u * u)) << '\n';
  }

  nlohmann::json side = {
      {"sigma_px", fit.sigma},
      {"mae", fit.mae},
      {"rmse", fit.rmse},
      {"matched_area", fit.matched_area},
      {"focal_mm", config.focal_length * 1e3},
      {"f_number", config.f_number},
      {"d_f_m", config.focus_distance},
      {"pixel_um", config.pixel_pitch * 1e6},
      {"depth_offset_m", state.depth_offset},
      {"coc_px", state.coc_diameter / config.pixel_pitch},
      {"ar_px", state.wavefront_coefficient / config.pixel_pitch},
  };

  emit(o.out, csv.str(), out);
  std::string sidecar = o.sidecar;
  if (sidecar.empty() && !o.out.empty() && o.out != "-") {
    sidecar = fs::path(o.out).replace_extension(".json").string();
  }
  if (!sidecar.empty()) emit(sidecar, side.dump(2) + "\n", out);
  return exit_ok;
}

int cmd_sweep(const SweepCliOptions& o, const NumericOptions& num, std::ostream& out, std::ostream& err) {
  if (o.full && o.collapsed) throw InvalidArgument("--full and --collapsed are exclusive");
  SweepGrid grid = o.reduced ? SweepGrid::reduced() : SweepGrid{};
  if (!o.f_numbers.empty()) grid.f_numbers = o.f_numbers;
  if (!o.c_max_values.empty()) grid.c_max_values = o.c_max_values;
  if (!o.focus_distances.empty()) {
    grid.focus_distances.clear();
    for (const auto& d : o.focus_distances) grid.focus_distances.push_back(parse_length(d));
  }
  if (!o.pixel_pitches.empty()) {
    grid.pixel_pitches.clear();
    for (const auto& p : o.pixel_pitches) grid.pixel_pitches.push_back(parse_length(p));
  }
  if (o.eta) grid.eta = *o.eta;
  if (o.n_depth) grid.n_depth = *o.n_depth;
  grid.validate();

  SweepOptions options;
  options.collapse_depth = !o.full;
  options.reference_distance = parse_length(o.reference);
  options.jobs = o.jobs > 0 ? o.jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const TableFormat format = pick_format(o.format, o.out);
  const EvaluationSettings settings = num.settings();

  const auto t0 = std::chrono::steady_clock::now();
  const auto records = run_sweep(grid, settings, options);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::ostringstream table;
  write_records(table, records, format, options.collapse_depth ? TableSchema::collapsed : TableSchema::full);
  emit(o.out, table.str(), out);

  std::size_t failed = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].ok()) continue;
    ++failed;
    err << "record " << i << " (f_n=" << records[i].f_number << ", C_max=" << records[i].c_max
        << ", P=" << records[i].pixel_pitch * 1e6 << "um) failed: " << *records[i].error << '\n';
  }
  err << records.size() << " records";
  if (failed) err << " (" << failed << " failed)";
  err << " in " << fmt(wall, "%.1f") << " s with " << options.jobs << " job(s)\n";
  return failed ? exit_numeric : exit_ok;
}

int cmd_filter(const FilterCliOptions& o, std::ostream& out, std::ostream& err) {
  reject_same_file(o.in, o.out);
  reject_same_file(o.in, o.stats);
  FilterCriteria criteria;
  criteria.mae_threshold = o.mae_max;
  criteria.sigma_lower = o.sigma_min;
  criteria.sigma_upper = o.sigma_max;
  criteria.pixel_max = parse_length(o.pixel_max);
  criteria.focal_max = parse_length(o.focal_max);
  if (o.pixel_exact) criteria.pixel_exact = parse_length(*o.pixel_exact);
  criteria.validate();

  const auto records = read_records_file(o.in);
  if (infer_schema(records) != TableSchema::full && !records.empty()) {
    throw SchemaError(o.in + ": filtering needs the depth-resolved table; missing column 'd_f_m'");
  }
  const FilterResult result = filter_records(records, criteria);

  std::ostringstream table;
  write_records(table, result.records, pick_format(o.format, o.out), TableSchema::full);
  emit(o.out, table.str(), out);
  if (!o.stats.empty()) {
    std::ostringstream stats;
    write_depth_stats(stats, result.per_depth, format_for_path(o.stats));
    emit(o.stats, stats.str(), out);
  }
  std::ostream& report = (o.out.empty() || o.out == "-") ? err : out;
  report << result.records.size() << '\n';
  return exit_ok;
}

int cmd_plot(const PlotOptions& o, std::ostream& out) {
  std::ifstream in(o.in, std::ios::binary);
  if (!in) throw IoError("cannot open '" + o.in + "' for reading");
  const CsvColumns csv = read_numeric_csv(in);
  if (csv.rows() == 0) throw InvalidArgument(o.in + ": no data rows to plot");
  if (csv.names.size() < 2) throw InvalidArgument(o.in + ": need at least two columns");

  auto index_of = [&](const std::string& name) {
    for (std::size_t i = 0; i < csv.names.size(); ++i) {
      if (csv.names[i] == name) return i;
    }
    throw InvalidArgument(o.in + ": no column named '" + name + "'");
  };
  const std::size_t xi = o.x_column.empty() ? 0 : index_of(o.x_column);
  std::vector<std::size_t> ys;
  if (o.y_columns.empty()) {
    for (std::size_t i = 0; i < csv.names.size(); ++i) {
      if (i != xi) ys.push_back(i);
    }
  } else {
    for (const auto& y : o.y_columns) ys.push_back(index_of(y));
  }

  std::vector<PlotSeries> series;
  for (std::size_t yi : ys) series.push_back({csv.names[yi], csv.columns[xi], csv.columns[yi]});
  PlotLabels labels{o.title, o.x_label.empty() ? csv.names[xi] : o.x_label, o.y_label};
  emit(o.out, render_svg(series, labels), out);
  return exit_ok;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Defocus transfer functions, Gaussian blur fits and camera-settings sweeps", "defocus"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value file overriding numeric defaults");

  NumericOptions num;
  app.add_option("--lambda-min", num.lambda_min, "Shortest wavelength (e.g. 200nm)")->capture_default_str();
  app.add_option("--lambda-max", num.lambda_max, "Longest wavelength (e.g. 2um)")->capture_default_str();
  app.add_option("--temperature", num.temperature, "Black-body temperature (e.g. 6000K)")->capture_default_str();
  app.add_option("--lambda-samples", num.lambda_samples, "Wavelength nodes")->capture_default_str();
  app.add_option("--freq-samples", num.freq_samples, "Frequency samples on [0, 1] cycles/pixel")
      ->capture_default_str();
  app.add_option("--quad-base-nodes", num.quad.base_nodes)->capture_default_str();
  app.add_option("--quad-nodes-per-oscillation", num.quad.nodes_per_oscillation)->capture_default_str();
  app.add_option("--quad-tolerance", num.quad.absolute_tolerance)->capture_default_str();
  app.add_option("--quad-max-nodes", num.quad.max_nodes)->capture_default_str();

  MonoOptions mono;
  auto* mono_cmd = app.add_subcommand("otf-mono", "Monochrome defocused OTF over s in [0, 1]");
  mono_cmd->add_option("--ar-over-lambda", mono.ar_over_lambda, "Defocus severity A_R / lambda")->required();
  mono_cmd->add_option("--samples", mono.samples, "Number of s samples")->capture_default_str();
  mono_cmd->add_option("--mode", mono.mode, "Source of the h_transfer column")
      ->check(CLI::IsMember({"exact", "approx"}))
      ->capture_default_str();
  mono_cmd->add_option("--out", mono.out, "CSV path (default stdout)");

  SpectralOptions spec;
  auto* spec_cmd = app.add_subcommand("otf-spectral", "Polychromatic defocus filter and its Gaussian fit");
  spec_cmd->add_option("--f", spec.focal, "Focal length (e.g. 15mm)")->required();
  spec_cmd->add_option("--fn", spec.f_number, "f-number")->required();
  spec_cmd->add_option("--df", spec.focus, "Focused distance (e.g. 1m)")->required();
  spec_cmd->add_option("--pixel", spec.pixel, "Pixel pitch (e.g. 5.6um)")->required();
  spec_cmd->add_option("--coc-px", spec.coc_px, "Signed blur diameter in pixels");
  spec_cmd->add_option("--depth-offset", spec.depth_offset, "Scene depth offset (e.g. -0.1m)");
  spec_cmd->add_option("--ar-px", spec.ar_px, "Signed defocus coefficient A_R in pixels");
  spec_cmd->add_option("--out", spec.out, "CSV path (default stdout)");
  spec_cmd->add_option("--sidecar", spec.sidecar, "Fit summary JSON (default: --out with .json)");

  SweepCliOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Camera-settings sweep");
  sweep_cmd->add_flag("--full", sweep.full, "One record per (d_f, f_n, C_max, P)");
  sweep_cmd->add_flag("--collapsed", sweep.collapsed, "One record per (f_n, C_max, P) at --reference-df (default)");
  sweep_cmd->add_flag("--reduced", sweep.reduced, "Start from the 3x3x2 quick grid");
  sweep_cmd->add_option("--fn", sweep.f_numbers, "f-numbers")->delimiter(',');
  sweep_cmd->add_option("--df", sweep.focus_distances, "Focus distances")->delimiter(',');
  sweep_cmd->add_option("--cmax", sweep.c_max_values, "C_max values in pixels")->delimiter(',');
  sweep_cmd->add_option("--pixel", sweep.pixel_pitches, "Pixel pitches")->delimiter(',');
  sweep_cmd->add_option("--eta", sweep.eta, "Relative depth half-range");
  sweep_cmd->add_option("--n-depth", sweep.n_depth, "Depth samples per record");
  sweep_cmd->add_option("--reference-df", sweep.reference, "Focus distance of the collapsed table")
      ->capture_default_str();
  sweep_cmd->add_option("--jobs,-j", sweep.jobs, "Worker threads (default: all cores)")
      ->envname("DEFOCUS_JOBS");
  sweep_cmd->add_option("--format", sweep.format, "csv or json (default from --out extension)");
  sweep_cmd->add_option("--out", sweep.out, "Output path (default stdout)");

  FilterCliOptions filter;
  auto* filter_cmd = app.add_subcommand("filter", "Apply acceptance filters to a full sweep table");
  filter_cmd->add_option("--in", filter.in, "Full sweep table (CSV or JSON)")->required();
  filter_cmd->add_option("--out", filter.out, "Filtered table (default stdout)");
  filter_cmd->add_option("--stats", filter.stats, "Per-depth statistics table");
  filter_cmd->add_option("--mae-max", filter.mae_max)->capture_default_str();
  filter_cmd->add_option("--sigma-min", filter.sigma_min, "Exclusive, pixels")->capture_default_str();
  filter_cmd->add_option("--sigma-max", filter.sigma_max, "Exclusive, pixels")->capture_default_str();
  filter_cmd->add_option("--pixel-max", filter.pixel_max)->capture_default_str();
  filter_cmd->add_option("--focal-max", filter.focal_max)->capture_default_str();
  filter_cmd->add_option("--pixel-exact", filter.pixel_exact, "Keep a single pixel pitch");
  filter_cmd->add_option("--format", filter.format, "csv or json (default from --out extension)");

  PlotOptions plot;
  auto* plot_cmd = app.add_subcommand("plot", "SVG line plot of CSV columns");
  plot_cmd->add_option("--in", plot.in, "Input CSV")->required();
  plot_cmd->add_option("--out", plot.out, "SVG path (default stdout)");
  plot_cmd->add_option("--x", plot.x_column, "x column (default: first)");
  plot_cmd->add_option("--y", plot.y_columns, "y columns (default: all others)");
  plot_cmd->add_option("--title", plot.title);
  plot_cmd->add_option("--xlabel", plot.x_label);
  plot_cmd->add_option("--ylabel", plot.y_label);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }

  try {
    if (*mono_cmd) return cmd_otf_mono(mono, num, out, err);
    if (*spec_cmd) return cmd_otf_spectral(spec, num, out);
    if (*sweep_cmd) return cmd_sweep(sweep, num, out, err);
    if (*filter_cmd) return cmd_filter(filter, out, err);
    if (*plot_cmd) return cmd_plot(plot, out);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return exit_io;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_numeric;
  }
  return exit_usage;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"defocus"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace defocus
