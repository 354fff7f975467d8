#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace gridrisk::data {

/// UTC instant with one-second resolution.
using Instant = std::chrono::sys_seconds;
using Seconds = std::chrono::seconds;

inline constexpr Seconds kHour{3600};
inline constexpr Seconds kDay{86400};

constexpr Seconds hours(std::int64_t n) { return kHour * n; }
constexpr Seconds days(std::int64_t n) { return kDay * n; }

constexpr Instant from_unix(std::int64_t seconds) { return Instant{Seconds{seconds}}; }
constexpr std::int64_t to_unix(Instant t) { return t.time_since_epoch().count(); }

/// Largest hour boundary not after `t`.
Instant floor_to_hour(Instant t);
constexpr bool on_hour(Instant t) { return to_unix(t) % 3600 == 0; }

/// Half-open interval [begin, end).
struct TimeRange {
  Instant begin;
  Instant end;

  constexpr bool contains(Instant t) const { return begin <= t && t < end; }
  constexpr bool empty() const { return end <= begin; }
  constexpr Seconds length() const { return end - begin; }
  constexpr std::int64_t hour_count() const { return empty() ? 0 : length() / kHour; }
  friend constexpr bool operator==(const TimeRange&, const TimeRange&) = default;
};

/// Parses ISO-8601 / RFC 3339 timestamps. A missing offset means UTC.
/// Accepts "2025-01-01T08:00:00-00:00", "2025-01-01T08:00:00Z",
/// "2025-01-01T08:00:00", "2025-01-01 08:00:00" and "2025-01-01T08:00".
std::optional<Instant> parse_timestamp(std::string_view text);

/// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_timestamp(Instant t);

std::string format_range(const TimeRange& range);

}  // namespace gridrisk::data
