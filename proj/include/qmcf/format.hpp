#pragma once

#include <charconv>
#include <string>
#include <string_view>

#include "qmcf/errors.hpp"

namespace qmcf {

/// Shortest decimal representation that parses back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// Strict full-token parse; throws DomainError with the offending text.
inline double parse_double(std::string_view text) {
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw DomainError("cannot parse number '" + std::string(text) + "'");
  return v;
}

}  // namespace qmcf
