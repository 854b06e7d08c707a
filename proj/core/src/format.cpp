#include "irl/format.hpp"

#include <cstdio>

namespace irl {

std::string format_float(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace irl
