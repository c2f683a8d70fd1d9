#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace farf {

/// Ordered key=value pairs. Text form is one pair per line; blank lines and
/// lines starting with '#' are ignored on parse.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Throws InvalidArgument naming the offending line.
KeyValues parse_kv(std::string_view text);
std::string format_kv(const KeyValues& kv);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

double parse_double(std::string_view key, std::string_view value);
std::int64_t parse_int(std::string_view key, std::string_view value);
std::uint64_t parse_uint(std::string_view key, std::string_view value);
/// Accepts true/false, 1/0, yes/no, on/off.
bool parse_bool(std::string_view key, std::string_view value);

}  // namespace farf
