#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

namespace scenopt {

// 17 significant digits: enough to round-trip any IEEE double exactly.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string fmt17_array(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += fmt17(v[i]);
  }
  s += "]";
  return s;
}

}  // namespace scenopt
