#pragma once

// Small strict text helpers shared by the file formats.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tinynose::text {

/// Shortest decimal that parses back to exactly the same double.
std::string format_real(double value);
/// printf-style %.{digits}g.
std::string format_significant(double value, int digits);

/// Whole-token parse; no leading '+', no surrounding whitespace, finite only.
std::optional<double> parse_real(std::string_view token);
std::optional<std::int64_t> parse_int(std::string_view token);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split_whitespace(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char delimiter);
/// Splits on '\n'. A single trailing newline does not produce an empty last line.
std::vector<std::string_view> lines(std::string_view s);

}  // namespace tinynose::text
