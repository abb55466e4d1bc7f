#pragma once

#include <charconv>
#include <string>
#include <string_view>

#include "error.hpp"

namespace bcseg {

// Shortest decimal form that parses back to the identical double. CSV files
// written with this round-trip bit exactly.
inline std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc{} || res.ptr != last) {
    fail(ErrorCode::format, "not a decimal number: '" + std::string(text) + "'");
  }
  return value;
}

inline long long parse_int(std::string_view text) {
  long long value = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    fail(ErrorCode::format, "not an integer: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace bcseg
