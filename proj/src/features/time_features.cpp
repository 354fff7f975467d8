#include "gridrisk/features/time_features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "absl/time/civil_time.h"
#include "absl/time/time.h"
#include "gridrisk/error.hpp"

namespace gridrisk::features {

struct TimeZone::Impl {
  std::string name;
  absl::TimeZone zone;
};

TimeZone TimeZone::named(const std::string& name) {
  absl::TimeZone zone;
  if (!absl::LoadTimeZone(name, &zone)) throw Error(ErrorCode::invalid_config, "unknown time zone", name);
  return TimeZone(std::make_shared<const Impl>(Impl{name, zone}));
}

TimeZone TimeZone::utc() { return TimeZone(std::make_shared<const Impl>(Impl{"UTC", absl::UTCTimeZone()})); }

const std::string& TimeZone::name() const { return impl_->name; }

CivilHour TimeZone::civil(Instant t) const {
  const auto info = impl_->zone.At(absl::FromUnixSeconds(data::to_unix(t)));
  const absl::CivilSecond cs = info.cs;
  CivilHour out;
  out.hour = cs.hour();
  // absl::Weekday enumerates monday first.
  out.weekday = static_cast<int>(absl::GetWeekday(cs));
  out.fractional_hour = cs.hour() + cs.minute() / 60.0 + cs.second() / 3600.0;
  return out;
}

TimeEncoding time_features(int hour, int weekday) {
  const double two_pi = 2.0 * std::numbers::pi;
  const double h = static_cast<double>(((hour % 24) + 24) % 24);
  const double d = static_cast<double>(((weekday % 7) + 7) % 7);
  return {std::sin(two_pi * h / 24.0), std::cos(two_pi * h / 24.0), std::sin(two_pi * d / 7.0),
          std::cos(two_pi * d / 7.0)};
}

TimeEncoding time_features(Instant t, const TimeZone& tz) {
  const auto c = tz.civil(t);
  return time_features(c.hour, c.weekday);
}

namespace {

double smoothstep(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * (3.0 - 2.0 * x);
}

}  // namespace

double daylight_gate(double local_hour, const DaylightWindow& window) {
  if (!(window.ramp_hours > 0.0)) throw Error(ErrorCode::invalid_config, "daylight ramp must be positive");
  const double rise = smoothstep((local_hour - window.sunrise_hour) / window.ramp_hours);
  const double set = smoothstep((window.sunset_hour - local_hour) / window.ramp_hours);
  return std::min(rise, set);
}

double daylight_gate(Instant t, const TimeZone& tz, const DaylightWindow& window) {
  return daylight_gate(tz.civil(t).fractional_hour, window);
}

}  // namespace gridrisk::features
