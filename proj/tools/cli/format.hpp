#pragma once

#include <cstdio>
#include <string>

namespace everett::cli {

inline constexpr int kSignificantDigits = 12;

/// %.12g, the textual form used in every CSV and text output.
inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", kSignificantDigits, v);
  return buf;
}

/// Value rounded to 12 significant digits, for JSON emission.
inline double round_significant(double v) { return std::stod(format_number(v)); }

}  // namespace everett::cli
