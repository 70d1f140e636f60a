#pragma once

#include <string>
#include <string_view>

namespace fb {

// Shortest round-trip-safe text for a double: 17 significant digits, "nan"
// for NaN.
std::string format_double(double x);

// Shortest text that parses back to the same double ("2.01", "0.5").
std::string format_short(double x);

// Strict full-string parse; throws ConfigError naming `what` on failure.
double parse_double(std::string_view text, std::string_view what);
long long parse_integer(std::string_view text, std::string_view what);

}  // namespace fb
