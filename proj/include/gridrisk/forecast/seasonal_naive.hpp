#pragma once

#include <vector>

#include "gridrisk/data/series.hpp"

namespace gridrisk::forecast {

inline constexpr int kWeekHours = 168;

/// yhat(t + h) = y(t + h - 168 k) with the smallest k that lands at or
/// before t. Throws InsufficientHistory when a needed hour is absent.
std::vector<double> seasonal_naive(const data::HourlySeries& history, data::Instant issue, int horizon);

}  // namespace gridrisk::forecast
