#include "polylap/format.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include "polylap/error.hpp"

namespace polylap {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {
std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}
}  // namespace

double parse_double(const std::string& text, const char* what) {
  const std::string t = trim(text);
  double v = 0.0;
  const char* first = t.data();
  if (!t.empty() && t[0] == '+') ++first;
  const auto res = std::from_chars(first, t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw ValidationError(std::string(what) + ": not a number: '" + text + "'");
  }
  return v;
}

long long parse_int(const std::string& text, const char* what) {
  const std::string t = trim(text);
  long long v = 0;
  const char* first = t.data();
  if (!t.empty() && t[0] == '+') ++first;
  const auto res = std::from_chars(first, t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw ValidationError(std::string(what) + ": not an integer: '" + text + "'");
  }
  return v;
}

}  // namespace polylap
