#include "defocus/table_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "defocus/error.hpp"

namespace defocus {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::string> kCollapsedColumns{"f_number", "c_max_px", "pixel_um", "sigma_max_px",
                                                 "mae_max"};
const std::vector<std::string> kFullColumns{"d_f_m",        "f_number",     "c_max_px", "pixel_um",
                                            "focal_mm",     "sigma_max_px", "mae_max"};
const std::vector<std::string> kStatsColumns{"d_f_m",       "count",       "pixel_um_min",
                                             "pixel_um_max", "focal_mm_min", "focal_mm_max",
                                             "f_number_min", "f_number_max"};

std::string join(const std::vector<std::string>& cols) {
  std::string out;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ',';
    out += cols[i];
  }
  return out;
}

std::string fixed4(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(const std::string& text, const std::string& column, std::size_t line_no) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw SchemaError("line " + std::to_string(line_no) + ": column '" + column +
                      "' is not a number: '" + text + "'");
  }
  return v;
}

void check_header(const std::vector<std::string>& got, const std::vector<std::string>& want) {
  for (std::size_t i = 0; i < want.size(); ++i) {
    if (i >= got.size()) throw SchemaError("missing column '" + want[i] + "'");
    if (got[i] != want[i]) {
      throw SchemaError("unexpected column '" + got[i] + "' at position " + std::to_string(i + 1) +
                        " (expected '" + want[i] + "')");
    }
  }
  if (got.size() > want.size()) throw SchemaError("unexpected column '" + got[want.size()] + "'");
}

void mark_failed_if_nan(SweepRecord& r) {
  if (std::isnan(r.sigma_max) || std::isnan(r.mae_max) || std::isnan(r.focal_length)) {
    r.error = "evaluation failed";
  }
}

json record_to_json(const SweepRecord& r, TableSchema schema) {
  json j;
  auto num = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
  if (schema == TableSchema::full) j["d_f_m"] = r.focus_distance.value_or(kNaN);
  j["f_number"] = r.f_number;
  j["c_max_px"] = r.c_max;
  j["pixel_um"] = r.pixel_pitch * 1e6;
  if (schema == TableSchema::full) j["focal_mm"] = num(r.focal_length * 1e3);
  j["sigma_max_px"] = num(r.sigma_max);
  j["mae_max"] = num(r.mae_max);
  if (r.error) j["error"] = *r.error;
  return j;
}

double json_number(const json& obj, const std::string& key, std::size_t index) {
  if (!obj.contains(key)) {
    throw SchemaError("record " + std::to_string(index) + ": missing field '" + key + "'");
  }
  const json& v = obj.at(key);
  if (v.is_null()) return kNaN;
  if (!v.is_number()) {
    throw SchemaError("record " + std::to_string(index) + ": field '" + key + "' is not a number");
  }
  return v.get<double>();
}

std::vector<SweepRecord> read_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) throw SchemaError("empty table: no header line");
  const auto header = split_csv(line);
  const bool full = !header.empty() && header.front() == "d_f_m";
  const auto& columns = full ? kFullColumns : kCollapsedColumns;
  check_header(header, columns);

  std::vector<SweepRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != columns.size()) {
      throw SchemaError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(columns.size()) + " fields, found " +
                        std::to_string(cells.size()));
    }
    std::vector<double> v(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) v[i] = parse_number(cells[i], columns[i], line_no);
    SweepRecord r;
    std::size_t i = 0;
    if (full) r.focus_distance = v[i++];
    r.f_number = v[i++];
    r.c_max = v[i++];
    r.pixel_pitch = v[i++] / 1e6;
    r.focal_length = full ? v[i++] / 1e3 : kNaN;
    r.sigma_max = v[i++];
    r.mae_max = v[i++];
    if (full) mark_failed_if_nan(r);
    else if (std::isnan(r.sigma_max) || std::isnan(r.mae_max)) r.error = "evaluation failed";
    records.push_back(r);
  }
  return records;
}

std::vector<SweepRecord> read_json(std::istream& in) {
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_array()) throw SchemaError("JSON table must be an array of records");
  std::vector<SweepRecord> records;
  for (std::size_t k = 0; k < doc.size(); ++k) {
    const json& o = doc[k];
    if (!o.is_object()) throw SchemaError("record " + std::to_string(k) + " is not an object");
    SweepRecord r;
    const bool full = o.contains("d_f_m");
    if (full) r.focus_distance = json_number(o, "d_f_m", k);
    r.f_number = json_number(o, "f_number", k);
    r.c_max = json_number(o, "c_max_px", k);
    r.pixel_pitch = json_number(o, "pixel_um", k) / 1e6;
    r.focal_length = full ? json_number(o, "focal_mm", k) / 1e3 : kNaN;
    r.sigma_max = json_number(o, "sigma_max_px", k);
    r.mae_max = json_number(o, "mae_max", k);
    if (o.contains("error")) r.error = o.at("error").get<std::string>();
    records.push_back(r);
  }
  return records;
}

template <typename Fn>
void with_output(const std::filesystem::path& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  fn(out);
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

std::string csv_header(TableSchema schema) {
  return join(schema == TableSchema::full ? kFullColumns : kCollapsedColumns);
}

std::string stats_csv_header() { return join(kStatsColumns); }

TableSchema infer_schema(const std::vector<SweepRecord>& records) {
  for (const auto& r : records) {
    if (r.focus_distance) return TableSchema::full;
  }
  return TableSchema::collapsed;
}

void write_records(std::ostream& out, const std::vector<SweepRecord>& records, TableFormat format,
                   std::optional<TableSchema> schema) {
  const TableSchema s = schema.value_or(infer_schema(records));
  if (format == TableFormat::json) {
    json doc = json::array();
    for (const auto& r : records) doc.push_back(record_to_json(r, s));
    out << doc.dump(2) << '\n';
    return;
  }
  out << csv_header(s) << '\n';
  for (const auto& r : records) {
    const double sigma = r.ok() ? r.sigma_max : kNaN;
    const double mae = r.ok() ? r.mae_max : kNaN;
    if (s == TableSchema::full) out << fixed4(r.focus_distance.value_or(kNaN)) << ',';
    out << fixed4(r.f_number) << ',' << fixed4(r.c_max) << ',' << fixed4(r.pixel_pitch * 1e6) << ',';
    if (s == TableSchema::full) out << fixed4(r.ok() ? r.focal_length * 1e3 : kNaN) << ',';
    out << fixed4(sigma) << ',' << fixed4(mae) << '\n';
  }
}

std::vector<SweepRecord> read_records(std::istream& in, TableFormat format) {
  return format == TableFormat::json ? read_json(in) : read_csv(in);
}

void write_depth_stats(std::ostream& out, const std::vector<DepthStats>& stats, TableFormat format) {
  if (format == TableFormat::json) {
    json doc = json::array();
    auto num = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
    for (const auto& s : stats) {
      doc.push_back({{"d_f_m", s.focus_distance},
                     {"count", s.count},
                     {"pixel_um_min", num(s.pixel_min * 1e6)},
                     {"pixel_um_max", num(s.pixel_max * 1e6)},
                     {"focal_mm_min", num(s.focal_min * 1e3)},
                     {"focal_mm_max", num(s.focal_max * 1e3)},
                     {"f_number_min", num(s.f_number_min)},
                     {"f_number_max", num(s.f_number_max)}});
    }
    out << doc.dump(2) << '\n';
    return;
  }
  out << stats_csv_header() << '\n';
  for (const auto& s : stats) {
    out << fixed4(s.focus_distance) << ',' << s.count << ',' << fixed4(s.pixel_min * 1e6) << ','
        << fixed4(s.pixel_max * 1e6) << ',' << fixed4(s.focal_min * 1e3) << ','
        << fixed4(s.focal_max * 1e3) << ',' << fixed4(s.f_number_min) << ','
        << fixed4(s.f_number_max) << '\n';
  }
}

TableFormat format_for_path(const std::filesystem::path& path) {
  return path.extension() == ".json" ? TableFormat::json : TableFormat::csv;
}

void write_records_file(const std::filesystem::path& path, const std::vector<SweepRecord>& records,
                        TableFormat format, std::optional<TableSchema> schema) {
  with_output(path, [&](std::ostream& out) { write_records(out, records, format, schema); });
}

std::vector<SweepRecord> read_records_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  try {
    return read_records(in, format_for_path(path));
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

void write_depth_stats_file(const std::filesystem::path& path, const std::vector<DepthStats>& stats,
                            TableFormat format) {
  with_output(path, [&](std::ostream& out) { write_depth_stats(out, stats, format); });
}

}  // namespace defocus
