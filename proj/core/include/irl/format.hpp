#pragma once

#include <string>

namespace irl {

/// "%.17g" rendering used for every CSV float.
std::string format_float(double value);

}  // namespace irl
