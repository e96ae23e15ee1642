#pragma once

#include <string>

namespace sevrel {

// Locale-independent "%.<digits>g" rendering.
std::string format_general(double value, int significantDigits);

// Locale-independent fixed-point rendering with `decimals` digits after the point.
std::string format_fixed(double value, int decimals);

// Shortest string that parses back to exactly `value`.
std::string format_shortest(double value);

}  // namespace sevrel
