#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pedcrop::text {

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);
/// Splits on runs of spaces and tabs.
std::vector<std::string_view> split_ws(std::string_view s);

/// Whole-token parses; nullopt on any leftover character or range error.
std::optional<long long> parse_int(std::string_view s);
std::optional<double> parse_double(std::string_view s);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

}  // namespace pedcrop::text
