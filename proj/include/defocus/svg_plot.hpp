#pragma once

// Minimal standalone SVG line plots for CSV columns.

#include <iosfwd>
#include <string>
#include <vector>

namespace defocus {

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotLabels {
  std::string title;
  std::string x_label;
  std::string y_label;
};

/// Numeric CSV with a header row. Cells that read as nan are kept as NaN
/// and break the polyline; anything else non-numeric is an error.
struct CsvColumns {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

CsvColumns read_numeric_csv(std::istream& in);

/// One polyline per series, plus a legend when there is more than one.
/// Throws InvalidArgument when no series has a finite point.
std::string render_svg(const std::vector<PlotSeries>& series, const PlotLabels& labels,
                       int width = 640, int height = 420);

}  // namespace defocus
