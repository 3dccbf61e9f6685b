#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace proteograph::text {

// Shortest text that round-trips, capped at 17 significant digits.
std::string format_double(double value);

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);

// Whole-string strict parse; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

// Comma-separated fields; double quotes group a field and "" escapes a quote.
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace proteograph::text
