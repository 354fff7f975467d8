#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gridrisk/backtest/schedule.hpp"
#include "gridrisk/forecast/forecaster.hpp"

namespace gridrisk::backtest {

using data::AlignedFrame;
using forecast::ForecasterFactory;
using metrics::QuantileForecastSet;

struct RunOptions {
  std::string load_channel;
  /// Columns that must be complete around an issue time; empty means every
  /// column of the frame.
  std::vector<std::string> required_channels;
  /// Hours of history an issue needs, counting the issue hour.
  int lookback_hours = 240;
  /// Spacing of training and validation issue times inside a fold.
  int train_stride_hours = 24;
};

/// Issue times whose window [t - lookback + 1 h, t + horizon] is complete in
/// `frame` for every channel. One rule for all models keeps evaluation
/// windows matched.
std::vector<Instant> usable_issue_times(const AlignedFrame& frame, std::span<const Instant> candidates,
                                        std::span<const std::string> channels, int lookback_hours,
                                        int horizon_hours);

/// Training and validation issue times for one fold; every target of a
/// training issue lies before the validation range, every validation target
/// inside it.
forecast::FitWindow fit_window(const AlignedFrame& history, const Fold& fold, const ScheduleParams& params,
                               const RunOptions& options);

struct FoldResult {
  std::size_t index = 0;
  Instant cutoff;
  std::size_t scheduled_issues = 0;
  std::size_t evaluated_issues = 0;
  std::vector<double> parameters;
  QuantileForecastSet forecasts;  // empty when no issue was usable
};

struct BacktestResult {
  QuantileForecastSet forecasts;  // concatenated in time order
  std::vector<FoldResult> folds;
};

/// Fresh model per fold, fit on the history cut at the fold's last training
/// hour, then predicted at every usable issue time for leads 1..horizon.
/// Errors keep their code and gain the fold index as context.
BacktestResult run_backtest(const AlignedFrame& frame, const WalkForwardSchedule& schedule,
                            const ForecasterFactory& factory, const RunOptions& options);

}  // namespace gridrisk::backtest
