#pragma once

#include <string>
#include <string_view>

namespace czcal {

// Shortest-safe round-trip text for a double: 17 significant digits.
std::string format_double(double value);

// Strict parse of a full token; throws czcal::Error on trailing garbage.
double parse_double(std::string_view text);
long long parse_int(std::string_view text);

}  // namespace czcal
