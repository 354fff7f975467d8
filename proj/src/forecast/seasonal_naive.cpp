#include "gridrisk/forecast/seasonal_naive.hpp"

#include <string>

#include "gridrisk/error.hpp"

namespace gridrisk::forecast {

std::vector<double> seasonal_naive(const data::HourlySeries& history, data::Instant issue, int horizon) {
  if (horizon < 1) throw Error(ErrorCode::invalid_argument, "horizon must be >= 1");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(horizon));
  for (int h = 1; h <= horizon; ++h) {
    const int k = (h + kWeekHours - 1) / kWeekHours;
    const data::Instant t = issue + data::hours(h - kWeekHours * k);
    auto v = history.at(t);
    if (!v) {
      throw Error(ErrorCode::insufficient_history,
                  "no observation one week before lead " + std::to_string(h), data::format_timestamp(t));
    }
    out.push_back(*v);
  }
  return out;
}

}  // namespace gridrisk::forecast
