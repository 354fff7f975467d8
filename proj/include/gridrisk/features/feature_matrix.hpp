#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gridrisk/data/series.hpp"
#include "gridrisk/features/lag_scan.hpp"
#include "gridrisk/features/time_features.hpp"

namespace gridrisk::features {

using data::AlignedFrame;

/// A load-history column. Every variant resolves to a timestamp <= the issue
/// time; asking for anything later throws Leakage.
struct LoadLag {
  enum class Kind {
    from_issue,       // y at t - offset (offset >= 0)
    same_hour_day,    // y at the target hour on the latest fully observed day
    same_hour_week,   // y at t + h - 168
  };
  Kind kind = Kind::from_issue;
  int offset = 0;

  data::Instant resolve(data::Instant issue, int lead) const;
  std::string name() const;
};

struct FeatureSpec {
  std::string load_channel;
  /// Weather columns of the frame; each needs an entry in `profile`.
  std::vector<std::string> weather_channels;
  LagProfile profile;
  std::vector<LoadLag> load_lags{{LoadLag::Kind::from_issue, 0},
                                 {LoadLag::Kind::same_hour_day, 0},
                                 {LoadLag::Kind::same_hour_week, 0}};
  bool include_time_features = true;
  TimeZone tz = TimeZone::utc();

  std::vector<std::string> column_names() const;
  /// Per column: true when the value comes from after the issue time (weather
  /// at the target hour minus its lag, taken from actuals in backtests).
  std::vector<bool> future_weather_flags() const;
};

struct FeatureRow {
  data::Instant issue;
  int lead = 0;
  data::Instant target_time;
  std::vector<double> values;
};

/// Features for the load at t + h. Weather channel c contributes w at
/// (t + h) - lag_c; load history only reads timestamps <= t. Throws
/// GapInWindow when a required cell is absent.
FeatureRow lag_align(const AlignedFrame& frame, const FeatureSpec& spec, data::Instant issue, int lead);

/// Rows are issue-major, every retained issue time carries all `leads`.
struct FeatureMatrix {
  std::vector<std::string> columns;
  std::vector<bool> future_weather;
  std::vector<data::Instant> issue_times;  // one per retained issue
  std::vector<int> leads;
  std::vector<double> values;  // row-major, rows = issue_times.size() * leads.size()
  std::vector<double> target;  // y at t + h, one per row
  std::vector<data::Instant> skipped_issue_times;

  std::size_t rows() const { return target.size(); }
  std::size_t cols() const { return columns.size(); }
  std::span<const double> row(std::size_t r) const { return {values.data() + r * cols(), cols()}; }
  double at(std::size_t r, std::size_t c) const { return values[r * cols() + c]; }
  std::size_t row_index(std::size_t issue, std::size_t lead) const { return issue * leads.size() + lead; }

  /// Issues [first, first + count) as a new matrix.
  FeatureMatrix issue_slice(std::size_t first, std::size_t count) const;
};

/// Builds rows for every issue time whose features and targets are complete;
/// the rest are listed in `skipped_issue_times`.
FeatureMatrix build_feature_matrix(const AlignedFrame& frame, const FeatureSpec& spec,
                                   std::span<const data::Instant> issue_times, std::span<const int> leads);

/// Intercept-only design: zero columns, one row per target with lead 1.
FeatureMatrix target_only_matrix(std::span<const double> targets);

}  // namespace gridrisk::features
