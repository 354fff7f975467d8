#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "gridrisk/metrics/forecast_set.hpp"

namespace gridrisk::metrics {

/// Mean absolute percentage error in percent. Every actual must be > 0.
double mape(std::span<const double> actual, std::span<const double> forecast);

/// Shares (percent) of points with actual > forecast (under), forecast >
/// actual (over) and exact ties. The three always sum to 100.
struct DirectionRates {
  double upr_pct = 0.0;
  double opr_pct = 0.0;
  double tie_pct = 0.0;
};

DirectionRates direction_rates(std::span<const double> actual, std::span<const double> forecast);

/// Mean of (point forecast - actual) at lead `h_star`; positive values mean
/// over-forecast.
double bias_at_horizon(const QuantileForecastSet& fs, int h_star);

/// Sorted linear interpolation at rank (n - 1) * p / 100, 0 <= p <= 100.
double percentile(std::span<const double> values, double p);

enum class ReserveBasis { mw, pct };

/// Percentile of the clipped under-forecast error, max(0, y - yhat) in MW or
/// 100 * max(0, (y - yhat) / yhat) in percent of the point forecast.
double reserve(std::span<const double> actual, std::span<const double> forecast, double p, ReserveBasis basis);
double reserve(const QuantileForecastSet& fs, double p, ReserveBasis basis, std::span<const int> leads = {});

using LargeErrorCounts = std::map<double, std::size_t>;

/// Points with |y - yhat| strictly above each threshold.
LargeErrorCounts large_error_counts(std::span<const double> actual, std::span<const double> forecast,
                                    std::span<const double> thresholds);
LargeErrorCounts large_error_counts(const QuantileForecastSet& fs, std::span<const double> thresholds,
                                    std::span<const int> leads = {});

}  // namespace gridrisk::metrics
