#pragma once

#include <cstdio>
#include <string>

namespace aqp::csv {

/// Full round-trip precision.
inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace aqp::csv
