#pragma once

#include <cstdio>
#include <string>

namespace mmarena::io {

// Fixed-precision decimal text so report files are byte-stable across runs.
inline std::string format_double(double value, int precision = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, value);
  return buf;
}

// Shortest-round-trip formatting for values that must reload exactly.
inline std::string format_exact(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace mmarena::io
