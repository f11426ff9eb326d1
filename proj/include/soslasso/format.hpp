#pragma once

#include <charconv>
#include <string>

namespace soslasso {

/// Shortest decimal string that round-trips to the identical double.
inline std::string dtos(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace soslasso
