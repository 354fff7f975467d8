#include "gridrisk/data/time.hpp"

#include <array>

#include "absl/time/time.h"

namespace gridrisk::data {

Instant floor_to_hour(Instant t) {
  std::int64_t s = to_unix(t);
  std::int64_t r = s % 3600;
  if (r < 0) r += 3600;
  return from_unix(s - r);
}

std::optional<Instant> parse_timestamp(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '"')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '"' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (text.empty()) return std::nullopt;

  static constexpr std::array<const char*, 6> kFormats = {
      "%Y-%m-%d%ET%H:%M:%E*S%Ez",  // RFC 3339 with offset (Z or +hh:mm)
      "%Y-%m-%d%ET%H:%M%Ez",
      "%Y-%m-%d%ET%H:%M:%E*S",
      "%Y-%m-%d %H:%M:%E*S",
      "%Y-%m-%d%ET%H:%M",
      "%Y-%m-%d %H:%M",
  };
  const std::string input(text);
  for (const char* format : kFormats) {
    absl::Time parsed;
    std::string err;
    if (absl::ParseTime(format, input, absl::UTCTimeZone(), &parsed, &err)) {
      return from_unix(absl::ToUnixSeconds(parsed));
    }
  }
  return std::nullopt;
}

std::string format_timestamp(Instant t) {
  return absl::FormatTime("%Y-%m-%dT%H:%M:%SZ", absl::FromUnixSeconds(to_unix(t)),
                          absl::UTCTimeZone());
}

std::string format_range(const TimeRange& range) {
  return "[" + format_timestamp(range.begin) + ", " + format_timestamp(range.end) + ")";
}

}  // namespace gridrisk::data
