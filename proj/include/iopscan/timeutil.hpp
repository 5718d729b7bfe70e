#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace iopscan {

using Timestamp = std::chrono::sys_seconds;

/// Parses either ISO-8601 ("2015-06-01T12:30:00Z", optional fractional
/// seconds, 'Z' or +hh:mm offset) or the classic tweet form
/// "Mon Jun 01 12:30:00 +0000 2015". Returns nullopt on malformed input.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// Canonical form: "YYYY-MM-DDTHH:MM:SSZ".
std::string format_timestamp(Timestamp ts);

Timestamp make_timestamp(int year, unsigned month, unsigned day, int hour = 0, int minute = 0,
                         int second = 0);

Timestamp now_utc();

}  // namespace iopscan
