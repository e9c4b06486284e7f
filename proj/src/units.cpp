#include "defocus/units.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <string>
#include <utility>

#include "defocus/error.hpp"

namespace defocus {

namespace {

std::string_view strip(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

// Splits "<number><unit>" at the end of the longest numeric prefix.
std::pair<double, std::string_view> split_quantity(std::string_view text) {
  text = strip(text);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr == text.data()) {
    throw InvalidArgument("'" + std::string(text) + "' does not start with a number");
  }
  if (!std::isfinite(v)) throw InvalidArgument("'" + std::string(text) + "' is not finite");
  return {v, strip(text.substr(static_cast<std::size_t>(ptr - text.data())))};
}

}  // namespace

double parse_length(std::string_view text) {
  static constexpr std::array<std::pair<std::string_view, double>, 6> kUnits{{
      {"nm", 1e-9}, {"um", 1e-6}, {"\xC2\xB5m", 1e-6}, {"mm", 1e-3}, {"cm", 1e-2}, {"m", 1.0}}};
  const auto [v, unit] = split_quantity(text);
  if (unit.empty()) {
    throw InvalidArgument("length '" + std::string(strip(text)) +
                          "' needs a unit suffix (nm, um, mm, cm or m)");
  }
  for (const auto& [name, scale] : kUnits) {
    if (unit == name) return v * scale;
  }
  throw InvalidArgument("unknown length unit '" + std::string(unit) + "' in '" +
                        std::string(strip(text)) + "'");
}

double parse_temperature(std::string_view text) {
  const auto [v, unit] = split_quantity(text);
  if (!unit.empty() && unit != "K") {
    throw InvalidArgument("unknown temperature unit '" + std::string(unit) + "' (expected K)");
  }
  return v;
}

}  // namespace defocus
