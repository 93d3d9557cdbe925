#pragma once

#include <cstdio>
#include <string>

namespace aquifer::detail {

/// Round-trip exact, locale independent for the C locale.
inline std::string format_number(double x) {
  if (x == 0.0) x = 0.0;  // prints -0 as 0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace aquifer::detail
