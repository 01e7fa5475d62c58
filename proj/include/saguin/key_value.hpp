#ifndef SAGUIN_KEY_VALUE_HPP
#define SAGUIN_KEY_VALUE_HPP

#include <charconv>
#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "saguin/error.hpp"

namespace saguin::kv {

/// Ordered `key = value` pairs. Keys use dotted section prefixes
/// (`soil.vwc`); `#` starts a comment; blank lines are ignored.
using Entries = std::vector<std::pair<std::string, std::string>>;

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

/// Parses a key-value stream; duplicate keys and lines without '=' are errors.
inline Entries parse(std::istream& in, std::string_view source = "<input>") {
  Entries out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(fmt::format("{}:{}: expected 'key = value'", source, line_no));
    const auto key = trim(view.substr(0, eq));
    const auto value = trim(view.substr(eq + 1));
    if (key.empty()) throw ConfigError(fmt::format("{}:{}: empty key", source, line_no));
    for (const auto& [k, v] : out)
      if (k == key) throw ConfigError(fmt::format("{}:{}: duplicate key '{}'", source, line_no, key));
    out.emplace_back(std::string(key), std::string(value));
  }
  return out;
}

inline double to_double(std::string_view key, std::string_view value) {
  double v = 0.0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc{} || ptr != end)
    throw ConfigError(fmt::format("'{}': '{}' is not a number", key, value));
  return v;
}

inline long long to_integer(std::string_view key, std::string_view value) {
  long long v = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc{} || ptr != end)
    throw ConfigError(fmt::format("'{}': '{}' is not an integer", key, value));
  return v;
}

inline std::uint64_t to_u64(std::string_view key, std::string_view value) {
  std::uint64_t v = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc{} || ptr != end)
    throw ConfigError(fmt::format("'{}': '{}' is not an unsigned 64-bit integer", key, value));
  return v;
}

inline bool to_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw ConfigError(fmt::format("'{}': '{}' is not a boolean", key, value));
}

inline std::vector<double> to_double_list(std::string_view key, std::string_view value) {
  std::vector<double> out;
  while (!value.empty()) {
    const auto comma = value.find(',');
    out.push_back(to_double(key, trim(value.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    value = value.substr(comma + 1);
  }
  return out;
}

/// Shortest round-trip text for a double.
inline std::string format_number(double v) { return fmt::format("{}", v); }

inline std::string format_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_number(values[i]);
  }
  return out;
}

}  // namespace saguin::kv

#endif  // SAGUIN_KEY_VALUE_HPP
