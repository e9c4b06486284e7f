#pragma once

// CSV and JSON serialization of sweep tables and per-depth statistics.
//
// CSV columns use the paper's display units (mm, um) with 4 decimals; JSON
// carries the same fields at full double precision.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "defocus/sweep.hpp"

namespace defocus {

enum class TableFormat { csv, json };
enum class TableSchema { collapsed, full };

std::string csv_header(TableSchema schema);
std::string stats_csv_header();

/// `full` if any record carries a focus distance, otherwise `collapsed`.
TableSchema infer_schema(const std::vector<SweepRecord>& records);

/// Failed records are written with "nan" result fields (CSV) or an "error"
/// member (JSON).
void write_records(std::ostream& out, const std::vector<SweepRecord>& records, TableFormat format,
                   std::optional<TableSchema> schema = std::nullopt);

/// Throws SchemaError naming the first offending column or field.
std::vector<SweepRecord> read_records(std::istream& in, TableFormat format);

void write_depth_stats(std::ostream& out, const std::vector<DepthStats>& stats, TableFormat format);

/// `.json` selects JSON, anything else CSV.
TableFormat format_for_path(const std::filesystem::path& path);

/// File wrappers; I/O failures raise IoError carrying the path.
void write_records_file(const std::filesystem::path& path, const std::vector<SweepRecord>& records,
                        TableFormat format, std::optional<TableSchema> schema = std::nullopt);
std::vector<SweepRecord> read_records_file(const std::filesystem::path& path);
void write_depth_stats_file(const std::filesystem::path& path, const std::vector<DepthStats>& stats,
                            TableFormat format);

}  // namespace defocus
