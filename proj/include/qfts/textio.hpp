#pragma once

#include <map>
#include <string>
#include <string_view>

namespace qfts::textio {

/// Shortest-round-trip-safe text form of a double (17 significant digits).
std::string format_double(double value);

/// Parses a complete token as a double; false on any leftover characters.
bool parse_double(std::string_view token, double& value);

std::string_view trim(std::string_view text) noexcept;

/// `# key = value` comment lines collected while reading delimited text.
using Metadata = std::map<std::string, std::string>;

/// Splits a `# key = value` line into the map; returns false for other lines.
bool parse_metadata_line(std::string_view line, Metadata& meta);

}  // namespace qfts::textio
