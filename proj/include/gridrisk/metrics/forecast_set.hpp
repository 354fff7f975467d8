#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "gridrisk/data/time.hpp"

namespace gridrisk::metrics {

using data::Instant;

/// Flattened (actual, point forecast) pairs selected from a forecast set.
struct ScoredPoints {
  std::vector<double> actual;
  std::vector<double> forecast;
  std::size_t size() const { return actual.size(); }
};

/// Quantile forecasts per issue time and lead hour together with the actuals
/// they are scored against. Predictions are laid out [issue][lead][level].
///
/// The point (scheduled) forecast is the head at `point_level`, 0.5 unless a
/// single-quantile model is being scored on its only head.
class QuantileForecastSet {
 public:
  QuantileForecastSet() = default;
  QuantileForecastSet(std::vector<Instant> issue_times, std::vector<int> lead_hours,
                      std::vector<double> levels, std::vector<double> predictions,
                      std::vector<double> actuals, double point_level = 0.5);

  std::size_t issue_count() const { return issue_times_.size(); }
  std::size_t lead_count() const { return lead_hours_.size(); }
  std::size_t level_count() const { return levels_.size(); }
  std::size_t point_count() const { return issue_count() * lead_count(); }
  bool empty() const { return issue_times_.empty(); }

  std::span<const Instant> issue_times() const { return issue_times_; }
  std::span<const int> lead_hours() const { return lead_hours_; }
  std::span<const double> levels() const { return levels_; }
  std::span<const double> predictions() const { return predictions_; }
  std::span<const double> actuals() const { return actuals_; }
  double point_level() const { return point_level_; }
  std::size_t point_index() const { return point_index_; }

  std::size_t flat_index(std::size_t issue, std::size_t lead, std::size_t level) const {
    return (issue * lead_hours_.size() + lead) * levels_.size() + level;
  }
  double prediction(std::size_t issue, std::size_t lead, std::size_t level) const {
    return predictions_[flat_index(issue, lead, level)];
  }
  double actual(std::size_t issue, std::size_t lead) const { return actuals_[issue * lead_hours_.size() + lead]; }
  double point(std::size_t issue, std::size_t lead) const { return prediction(issue, lead, point_index_); }

  std::optional<std::size_t> lead_index(int lead_hour) const;
  std::optional<std::size_t> level_index(double level) const;

  /// Per (issue, lead): predictions non-decreasing across levels.
  bool non_crossing() const;

  /// Same shape with a different prediction tensor.
  QuantileForecastSet with_predictions(std::vector<double> predictions) const;

  /// Point forecasts and actuals at the given leads (all leads when empty),
  /// issue-major order.
  ScoredPoints scored_points(std::span<const int> leads = {}) const;

  /// Issues [first, first + count) as a new set.
  QuantileForecastSet issue_slice(std::size_t first, std::size_t count) const;

  /// Concatenates sets with identical leads, levels and point level. Issue
  /// times must stay strictly increasing.
  static QuantileForecastSet concat(std::span<const QuantileForecastSet> parts);

 private:
  std::vector<Instant> issue_times_;
  std::vector<int> lead_hours_;
  std::vector<double> levels_;
  std::vector<double> predictions_;
  std::vector<double> actuals_;
  double point_level_ = 0.5;
  std::size_t point_index_ = 0;
};

}  // namespace gridrisk::metrics
