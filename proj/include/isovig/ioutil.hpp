#pragma once

#include <charconv>
#include <string>

namespace isovig {

inline constexpr const char* kVersion = "0.1.0";

// Shortest decimal form that round-trips to the same double.
inline std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace isovig
