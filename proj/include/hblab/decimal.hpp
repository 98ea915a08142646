#pragma once

#include <string>
#include <string_view>

#include "hblab/extended.hpp"

namespace hblab {

// Shortest decimal string that parses back to the same double.
std::string to_decimal(double x);

// Decimal string carrying every bit of x at its current precision.
std::string to_decimal(const Extended& x);

// Strict parse of a full decimal string; throws std::invalid_argument.
double parse_decimal(std::string_view text);

}  // namespace hblab
