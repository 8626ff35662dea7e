#pragma once

#include <string>

namespace hamkrylov {

/// Shortest decimal representation that parses back to exactly `value`.
std::string format_double(double value);

} // namespace hamkrylov
