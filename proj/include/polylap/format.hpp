#pragma once

#include <string>

namespace polylap {

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

/// Parses a full string as a double; throws ValidationError otherwise.
double parse_double(const std::string& text, const char* what);
long long parse_int(const std::string& text, const char* what);

}  // namespace polylap
