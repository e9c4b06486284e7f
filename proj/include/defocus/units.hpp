#pragma once

// Unit-suffixed command-line quantities: "15mm", "5.6um", "1m", "6000K".

#include <string_view>

namespace defocus {

/// Length in metres. Accepts nm, um, µm, mm, cm and m suffixes (optionally
/// separated by spaces); rejects bare numbers and unknown units.
double parse_length(std::string_view text);

/// Temperature in kelvin; the K suffix is optional.
double parse_temperature(std::string_view text);

}  // namespace defocus
