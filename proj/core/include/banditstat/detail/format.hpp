#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace banditstat::detail {

// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Scientific form with 17 significant digits; round-trips exactly and keeps a
// fixed digit count for schema-stable output.
inline std::string format_double_full(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific, 16);
  return std::string(buf, res.ptr);
}

}  // namespace banditstat::detail
