#include "qfts/textio.hpp"

#include <charconv>
#include <cstdio>

namespace qfts::textio {

std::string format_double(double value) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", value);
  return std::string(buf, static_cast<std::size_t>(n));
}

bool parse_double(std::string_view token, double& value) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  if (token.empty()) return false;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  return ec == std::errc{} && ptr == end;
}

std::string_view trim(std::string_view text) noexcept {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

bool parse_metadata_line(std::string_view line, Metadata& meta) {
  line = trim(line);
  if (line.empty() || line.front() != '#') return false;
  line.remove_prefix(1);
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) return false;
  const auto key = trim(line.substr(0, eq));
  if (key.empty()) return false;
  meta[std::string(key)] = std::string(trim(line.substr(eq + 1)));
  return true;
}

}  // namespace qfts::textio
