#pragma once

#include <cstdio>
#include <string>

namespace mfirl {

/// 17 significant digits, enough to reconstruct the double exactly. Used
/// by every CSV writer so repeated runs produce byte-identical files.
inline std::string csv_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace mfirl
