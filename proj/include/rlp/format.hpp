#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace rlp {

/// Round-trippable decimal text for a double: 17 significant digits, with
/// inf / -inf / nan spelled out.
inline std::string fmt17(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace rlp
