#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace irislab {

/// Shortest round-trip decimal form of x; "nan" for NaN. Output depends only
/// on the value, so repeated runs produce byte-identical files.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace irislab
