#pragma once

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace gamemac::io {

/// Locale-independent decimal formatting with `significant` significant
/// digits. Pass 0 for the shortest representation that round-trips.
inline std::string format_double(double value, int significant = 10) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buffer[64];
  std::to_chars_result result{};
  if (significant <= 0) {
    result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  } else {
    result = std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, significant);
  }
  if (result.ec != std::errc{}) throw std::runtime_error("failed to format floating-point value");
  return std::string(buffer, result.ptr);
}

inline std::string_view trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split(std::string_view text, char separator) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(separator, start);
    fields.push_back(trim(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

inline double parse_double(std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || !std::isfinite(value)) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return value;
}

inline long long parse_integer(std::string_view text) {
  text = trim(text);
  long long value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace gamemac::io
