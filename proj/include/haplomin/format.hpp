#pragma once

#include <cstdio>
#include <string>

namespace haplomin {

// Shortest round-trippable-ish decimal form; used everywhere CSV is written
// so identical runs produce identical bytes.
inline std::string format_g(double x, int significant = 9) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", significant, x);
  return buf;
}

inline std::string format_fixed(double x, int decimals) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  return buf;
}

}  // namespace haplomin
