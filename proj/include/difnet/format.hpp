#pragma once

#include <string>

namespace difnet {

/// Six significant digits, '.' decimal point, independent of locale.
std::string format_g6(double value);

/// Shortest representation that parses back to the same double.
std::string format_exact(double value);

}  // namespace difnet
