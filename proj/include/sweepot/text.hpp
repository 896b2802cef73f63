#pragma once

#include <charconv>
#include <string>
#include <string_view>

namespace sweepot {

/// Shortest decimal representation that round-trips the double exactly.
inline std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

/// Strict, locale-independent double parse of the full (trimmed) token.
inline bool parse_double(std::string_view token, double& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  while (first < last && (*first == ' ' || *first == '\t')) ++first;
  while (last > first && (*(last - 1) == ' ' || *(last - 1) == '\t' || *(last - 1) == '\r')) --last;
  if (first == last) return false;
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

inline bool parse_int(std::string_view token, int& out) {
  double v = 0.0;
  if (!parse_double(token, v)) return false;
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) return false;
  out = i;
  return true;
}

}  // namespace sweepot
