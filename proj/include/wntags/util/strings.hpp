#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wntags::util {

std::string_view trim(std::string_view s) noexcept;
std::string to_lower(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char delim);
// Splits on runs of ASCII whitespace, dropping empty fields.
std::vector<std::string_view> split_ws(std::string_view s);

std::optional<double> parse_double(std::string_view s) noexcept;

template <typename Int>
std::optional<Int> parse_int(std::string_view s, int base = 10) noexcept {
  Int value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value, base);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

// Locale-independent fixed-point formatting.
std::string format_fixed(double value, int digits);

}  // namespace wntags::util
