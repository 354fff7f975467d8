#pragma once

#include <memory>
#include <string>

#include "gridrisk/data/time.hpp"

namespace gridrisk::features {

using data::Instant;

struct CivilHour {
  int hour = 0;          // 0..23 local
  int weekday = 0;       // 0 = Monday .. 6 = Sunday
  double fractional_hour = 0.0;
};

/// Named IANA time zone ("America/Los_Angeles", "UTC"). Local hour-of-day
/// follows the zone's DST rules: the repeated autumn hour maps to the same
/// local hour twice and the skipped spring hour never appears.
class TimeZone {
 public:
  /// Throws InvalidConfig for an unknown zone name.
  static TimeZone named(const std::string& name);
  static TimeZone utc();

  const std::string& name() const;
  CivilHour civil(Instant t) const;

 private:
  struct Impl;
  explicit TimeZone(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

struct TimeEncoding {
  double hour_sin = 0.0;
  double hour_cos = 1.0;
  double dow_sin = 0.0;
  double dow_cos = 1.0;
};

/// sin/cos of 2 pi hour / 24 and 2 pi dow / 7. Periodic in both arguments.
TimeEncoding time_features(int hour, int weekday);
TimeEncoding time_features(Instant t, const TimeZone& tz);

struct DaylightWindow {
  double sunrise_hour = 6.0;
  double sunset_hour = 18.0;
  double ramp_hours = 1.0;
};

/// Daylight prior in [0, 1]: 0 at night, 1 in full daylight, smoothstep ramps
/// of `ramp_hours` starting at sunrise and ending at sunset (local time).
double daylight_gate(double local_hour, const DaylightWindow& window = {});
double daylight_gate(Instant t, const TimeZone& tz, const DaylightWindow& window = {});

}  // namespace gridrisk::features
